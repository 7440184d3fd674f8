#include <doctest.h>

#include "fixtures.hpp"
#include "mapgame/knowledge.hpp"

using namespace mapgame;
using fixtures::only_reveal;

TEST_CASE("new game") {
  MixedGraph g = fixtures::line3();
  Game game(g, fixtures::reach(g, Constraint::Path));
  GameState s = game.new_game();
  CHECK(s.label_count() == 1);
  CHECK(s.turn == Turn::AdversaryToReveal);
  CHECK(s.cost_spent == 0);
  CHECK(s.revealed_count == 1);

  GameSpec bad = io::default_spec(g);
  bad.objective = Objective::VisitAtLeast;
  bad.min_visits = 5;
  CHECK_FALSE(check_spec(g, bad).empty());
  CHECK_THROWS_AS(Game(g, bad), GameError);

  MixedGraph tri = fixtures::triangle();
  GameSpec needs_target = io::default_spec(tri);
  needs_target.objective = Objective::ReachTarget;
  CHECK_FALSE(check_spec(tri, needs_target).empty());
}

TEST_CASE("s-x-t path game is won in two moves") {
  MixedGraph g = fixtures::line3();
  Game game(g, fixtures::reach(g, Constraint::Path));
  GameState s = game.new_game();
  s = game.apply_reveal(s, only_reveal(game, s));
  CHECK(s.revealed_count == 2);
  auto moves = game.searcher_moves(s);
  REQUIRE(moves.size() == 1);
  s = game.apply_move(s, moves[0]);
  s = game.apply_reveal(s, only_reveal(game, s));
  moves = game.searcher_moves(s);
  REQUIRE(moves.size() == 1);
  s = game.apply_move(s, moves[0]);
  CHECK(s.turn == Turn::Terminal);
  CHECK(s.outcome == Outcome::SearcherWin);
  CHECK(s.moves == 2);
}

TEST_CASE("fork: two fresh units give two moves, dead end loses a path game") {
  MixedGraph g = fixtures::fork();
  Game game(g, fixtures::reach(g, Constraint::Path));
  GameState s = game.new_game();
  Reveal r = only_reveal(game, s);
  CHECK(r.fresh_units() == 2);
  s = game.apply_reveal(s, r);
  auto moves = game.searcher_moves(s);
  REQUIRE(moves.size() == 2);
  s = game.apply_move(s, moves[0]);
  // Reveal the dead end: only the link back to s.
  auto reveals = knowledge::enumerate_reveals(s, game);
  auto dead = std::find_if(reveals.begin(), reveals.end(), [](const Reveal& x) { return x.fresh.empty(); });
  REQUIRE(dead != reveals.end());
  s = game.apply_reveal(s, *dead);
  CHECK(game.searcher_moves(s).empty());
  CHECK(s.outcome == Outcome::SearcherLoss);
}

TEST_CASE("walk rule re-admits a label after a new discovery") {
  MixedGraph g = fixtures::fork();
  Game game(g, fixtures::reach(g, Constraint::Walk));
  GameState s = game.new_game();
  s = game.apply_reveal(s, only_reveal(game, s));
  s = game.apply_move(s, {1, ElementKind::Edge});
  auto reveals = knowledge::enumerate_reveals(s, game);
  auto dead = std::find_if(reveals.begin(), reveals.end(), [](const Reveal& x) { return x.fresh.empty(); });
  REQUIRE(dead != reveals.end());
  s = game.apply_reveal(s, *dead);
  // Back to s: allowed because label 1 was discovered after s was last entered.
  auto moves = game.searcher_moves(s);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].to == 0);
  int visited = s.visited_count();
  s = game.apply_move(s, moves[0]);
  CHECK(s.visited_count() == visited);
  CHECK(s.visit_order.size() == 3);
  // Label 1 was entered after the last discovery, so it is excluded now.
  moves = game.searcher_moves(s);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].to == 2);
}

TEST_CASE("sum budget accumulates move costs") {
  MixedGraph g;
  g.add_vertex("s");
  g.add_vertex("t");
  g.add_edge(0, 1, 3);
  g.start = 0;
  g.target = 1;
  GameSpec spec = fixtures::reach(g, Constraint::Path);
  spec.budget = 5;
  Game game(g, spec);
  GameState s = game.new_game();
  s = game.apply_reveal(s, only_reveal(game, s));
  s = game.apply_move(s, game.searcher_moves(s).at(0));
  CHECK(s.cost_spent == 3);
  CHECK(s.outcome == Outcome::SearcherWin);
}

TEST_CASE("reveals record known links and grow the label set") {
  MixedGraph tri = fixtures::triangle();
  tri.target = 2;
  Game game(tri, fixtures::reach(tri, Constraint::Path));
  GameState s = game.new_game();
  auto reveals = knowledge::enumerate_reveals(s, game);
  REQUIRE(reveals.size() == 1);
  const Reveal& r = reveals[0];
  CHECK(r.fresh_units() == 2);
  CHECK(std::count_if(r.fresh.begin(), r.fresh.end(), [](const FreshGroup& f) { return f.is_target; }) == 1);
  s = game.apply_reveal(s, r);
  CHECK(s.label_count() == 3);
  CHECK(s.revealed_count == 3);
  // Move to the non-target label; its reveal links back to s and to the target label.
  LabelId plain = s.labels[1].is_target ? 2 : 1;
  LabelId goal = 3 - plain;
  s = game.apply_move(s, {plain, ElementKind::Edge});
  Reveal second = only_reveal(game, s);
  REQUIRE(second.known.size() == 1);
  CHECK(second.known[0].label == goal);
  s = game.apply_reveal(s, second);
  CHECK_FALSE(s.known(plain, goal).empty());
}

TEST_CASE("an inconsistent reveal is rejected and the state is unchanged") {
  MixedGraph g = fixtures::line3();
  Game game(g, fixtures::reach(g, Constraint::Path));
  GameState s = game.new_game();
  Reveal bogus;
  bogus.fresh.push_back({Link{1, Link::kNone, Link::kNone}, false, 3});
  CHECK_THROWS_AS(game.apply_reveal(s, bogus), GameError);
  CHECK(s == game.new_game());
}

TEST_CASE("turn bounds") {
  MixedGraph g = fixtures::fork();
  CHECK(Game(g, fixtures::reach(g, Constraint::Path)).turn_bound() == 4);
  CHECK(Game(g, fixtures::reach(g, Constraint::Trail)).turn_bound() == 3);
  Game walk(g, fixtures::reach(g, Constraint::Walk));
  CHECK(walk.turn_bound() == 16);

  GameState s = walk.apply_reveal(walk.new_game(), only_reveal(walk, walk.new_game()));
  CHECK(walk.status(s) == Outcome::Ongoing);
  s.moves = walk.turn_bound() + 1;
  CHECK(walk.status(s) == Outcome::SearcherLoss);
}

TEST_CASE("an unreachable target ends the walk game in a loss") {
  MixedGraph g;
  g.add_vertex("s");
  g.add_vertex();
  g.add_vertex("t");
  g.add_edge(0, 1);
  g.start = 0;
  g.target = 2;
  Game game(g, fixtures::reach(g, Constraint::Walk));
  GameState s = game.new_game();
  int guard = 0;
  while (s.turn != Turn::Terminal && guard++ < 100) {
    if (s.turn == Turn::AdversaryToReveal) s = game.apply_reveal(s, only_reveal(game, s));
    else s = game.apply_move(s, game.searcher_moves(s).at(0));
  }
  CHECK(s.outcome == Outcome::SearcherLoss);
  CHECK(s.moves <= game.turn_bound());
}

TEST_CASE("replay reproduces states deterministically") {
  MixedGraph g = fixtures::line3();
  Game game(g, fixtures::reach(g, Constraint::Path));
  GameState s = game.new_game();
  Transcript t;
  while (s.turn != Turn::Terminal) {
    if (s.turn == Turn::AdversaryToReveal) {
      Reveal r = only_reveal(game, s);
      t.push_back(r);
      s = game.apply_reveal(s, r);
    } else {
      Move m = game.searcher_moves(s).at(0);
      t.push_back(m);
      s = game.apply_move(s, m);
    }
  }
  CHECK(game.replay(t) == s);
  CHECK(knowledge::canonical_key(game.replay(t)) == knowledge::canonical_key(s));
  CHECK(io::transcript_from_json(io::transcript_to_json(t)) == t);
}
