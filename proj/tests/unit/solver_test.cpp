#include <doctest.h>

#include "fixtures.hpp"
#include "mapgame/solver.hpp"

using namespace mapgame;
using solver::Value;
using solver::Verdict;

TEST_CASE("s-x-t is a searcher win under every constraint") {
  MixedGraph g = fixtures::line3();
  for (Constraint c : {Constraint::Path, Constraint::Trail, Constraint::Walk}) {
    Game game(g, fixtures::reach(g, c));
    CHECK(solver::solve(game).value == Value::SearcherWin);
  }
}

TEST_CASE("fork: adversary wins the path game, searcher wins the walk game") {
  MixedGraph g = fixtures::fork();
  Game path(g, fixtures::reach(g, Constraint::Path));
  auto rp = solver::solve(path);
  CHECK(rp.value == Value::AdversaryWin);
  CHECK(rp.states <= 30);

  Game walk(g, fixtures::reach(g, Constraint::Walk));
  CHECK(solver::solve(walk).value == Value::SearcherWin);
}

TEST_CASE("extracted strategies verify") {
  MixedGraph f = fixtures::fork();
  Game path(f, fixtures::reach(f, Constraint::Path));
  auto r = solver::solve(path);
  auto policy = solver::extract_adversary_policy(r);
  CHECK(solver::verify_adversary_policy(path, *policy).verdict == Verdict::Holds);

  MixedGraph l = fixtures::line3();
  Game line(l, fixtures::reach(l, Constraint::Path));
  auto w = solver::solve(line);
  auto strategy = solver::extract_searcher_strategy(w);
  CHECK(solver::verify_searcher_strategy(line, *strategy).verdict == Verdict::Holds);
}

TEST_CASE("resource limits are reported and block extraction") {
  MixedGraph g = fixtures::fork();
  Game game(g, fixtures::reach(g, Constraint::Walk));
  solver::Limits limits;
  limits.max_states = 1;
  limits.prune = false;
  auto r = solver::solve(game, limits);
  CHECK(r.value == Value::ResourceLimit);
  CHECK_THROWS(solver::extract_searcher_strategy(r));
  CHECK_THROWS(solver::extract_adversary_policy(r));
}

TEST_CASE("pruning does not change values") {
  MixedGraph g = fixtures::fork();
  for (Constraint c : {Constraint::Path, Constraint::Walk}) {
    Game game(g, fixtures::reach(g, c));
    solver::Limits plain;
    plain.prune = false;
    plain.memoize = false;
    CHECK(solver::solve(game, plain).value == solver::solve(game).value);
  }
}
