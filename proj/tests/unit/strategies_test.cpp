#include <doctest.h>

#include "fixtures.hpp"
#include "mapgame/knowledge.hpp"
#include "mapgame/qbf.hpp"
#include "mapgame/reductions.hpp"
#include "mapgame/solver.hpp"
#include "mapgame/strategies.hpp"

using namespace mapgame;
using solver::Verdict;

namespace {

// Plays a strategy against every reveal order, returning the move counts of the games.
std::vector<int> all_playouts(const Game& game, solver::SearcherStrategy& strategy) {
  std::vector<int> out;
  std::function<void(const GameState&)> rec = [&](const GameState& s) {
    if (s.turn == Turn::Terminal) {
      out.push_back(s.outcome == Outcome::SearcherWin ? s.moves : -1);
      return;
    }
    if (s.turn == Turn::SearcherToMove) return rec(game.apply_move(s, strategy.choose(game, s)));
    for (const auto& r : knowledge::enumerate_reveals(s, game)) rec(game.apply_reveal(s, r));
  };
  rec(game.new_game());
  return out;
}

reductions::GameInstance stpath(const std::string& qdimacs) {
  return reductions::build_stpath_undirected(qbf::normalize(qbf::parse_qdimacs(qdimacs)));
}

std::unique_ptr<solver::SearcherStrategy> proof_for(const reductions::GameInstance& gi, const std::string& name) {
  auto f = qbf::parse_qdimacs(gi.provenance.formula_text);
  return strategies::make_strategy(name, f);
}

}  // namespace

TEST_CASE("DFS walk") {
  auto dfs = strategies::dfs_walk_strategy();
  MixedGraph l = fixtures::line3();
  Game line(l, fixtures::reach(l, Constraint::Walk));
  CHECK(solver::verify_searcher_strategy(line, *dfs).verdict == Verdict::Holds);
  CHECK(all_playouts(line, *dfs) == std::vector<int>{2});

  MixedGraph f = fixtures::fork();
  Game fork(f, fixtures::reach(f, Constraint::Walk));
  auto lengths = all_playouts(fork, *dfs);
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths == std::vector<int>{2, 4});

  MixedGraph cut;
  cut.add_vertex("s");
  cut.add_vertex();
  cut.add_vertex("t");
  cut.add_edge(0, 1);
  cut.start = 0;
  cut.target = 2;
  Game disconnected(cut, fixtures::reach(cut, Constraint::Walk));
  auto v = solver::verify_searcher_strategy(disconnected, *dfs);
  CHECK(v.verdict == Verdict::Fails);
  REQUIRE(v.counter);
  GameState end = disconnected.replay(*v.counter);
  CHECK(end.outcome == Outcome::SearcherLoss);
  CHECK(end.moves <= disconnected.turn_bound());
}

TEST_CASE("first-move strategy fails on the fork path game") {
  MixedGraph f = fixtures::fork();
  Game fork(f, fixtures::reach(f, Constraint::Path));
  auto first = strategies::first_move_strategy();
  CHECK(solver::verify_searcher_strategy(fork, *first).verdict == Verdict::Fails);
}

TEST_CASE("sink-seeking policy") {
  auto sink = strategies::sink_seeking_policy();
  MixedGraph f = fixtures::fork();
  Game fork(f, fixtures::reach(f, Constraint::Path));
  CHECK(solver::verify_adversary_policy(fork, *sink).verdict == Verdict::Holds);

  MixedGraph l = fixtures::line3();
  Game line(l, fixtures::reach(l, Constraint::Path));
  CHECK(solver::verify_adversary_policy(line, *sink).verdict == Verdict::Fails);
}

TEST_CASE("s-t path proof strategy on the directed build of a true formula") {
  auto gi = reductions::build_stpath_directed(qbf::normalize(qbf::parse_qdimacs("p cnf 1 1\ne 1 0\n1 0")));
  Game game(gi.graph, gi.spec);
  auto proof = proof_for(gi, "stpath-proof");
  CHECK(solver::verify_searcher_strategy(game, *proof).verdict == Verdict::Holds);
}

TEST_CASE("sink-seeking on the s-t path builds of a false formula") {
  auto formula = qbf::normalize(qbf::parse_qdimacs("p cnf 1 2\ne 1 0\n1 0\n-1 0"));
  auto sink = strategies::sink_seeking_policy();

  auto directed = reductions::build_stpath_directed(formula);
  Game dgame(directed.graph, directed.spec);
  CHECK(solver::verify_adversary_policy(dgame, *sink).verdict == Verdict::Holds);

  // Undirected: the edge from the last clause entry to t skips that clause.
  auto undirected = reductions::build_stpath_undirected(formula);
  Game ugame(undirected.graph, undirected.spec);
  auto v = solver::verify_adversary_policy(ugame, *sink);
  REQUIRE(v.verdict == Verdict::Fails);
  REQUIRE(v.counter);
  GameState end = ugame.replay(*v.counter);
  CHECK(end.outcome == Outcome::SearcherWin);
  LabelId before = end.visit_order[end.visit_order.size() - 2];
  VertexId last_entry = undirected.graph.at("c2.c1");
  knowledge::for_each_embedding(end, ugame, [&](const knowledge::CoreEmbedding& e) {
    CHECK(e.image[before] == last_entry);
    return true;
  });
}

TEST_CASE("Hamiltonian proof strategy on a true formula") {
  auto gi = reductions::build_ham_path_undirected(qbf::normalize(qbf::parse_qdimacs("p cnf 1 1\ne 1 0\n1 0")));
  Game game(gi.graph, gi.spec);
  auto proof = proof_for(gi, "ham-proof");
  CHECK(solver::verify_searcher_strategy(game, *proof).verdict == Verdict::Holds);

  // One winning line: every label visited once, clause vertex entered once.
  GameState s = game.new_game();
  auto policy = strategies::first_consistent_policy();
  while (s.turn != Turn::Terminal)
    s = s.turn == Turn::SearcherToMove ? game.apply_move(s, proof->choose(game, s))
                                       : game.apply_reveal(s, policy->choose(game, s));
  CHECK(s.outcome == Outcome::SearcherWin);
  CHECK(static_cast<int>(s.visit_order.size()) == gi.graph.vertex_count);
  CHECK(s.labels[s.current].is_target);
}

TEST_CASE("registry") {
  for (const auto& name : strategies::policy_names()) {
    if (name == "optimal") continue;
    CHECK(strategies::make_policy(name) != nullptr);
  }
  CHECK_THROWS(strategies::make_policy("nope"));
  CHECK_THROWS(strategies::make_strategy("nope"));
}
