#include <doctest.h>

#include <random>

#include "mapgame/qbf.hpp"

using namespace mapgame::qbf;

TEST_CASE("parse_qdimacs reads prefix and clauses") {
  Formula f = parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n-1 -2 0");
  REQUIRE(f.prefix.size() == 2);
  CHECK(f.prefix[0] == QuantifiedVar{Quantifier::Exists, 1});
  CHECK(f.prefix[1] == QuantifiedVar{Quantifier::Forall, 2});
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == Clause{{1, false}, {2, false}});
  CHECK(f.clauses[1] == Clause{{1, true}, {2, true}});

  Formula g = parse_qdimacs("p cnf 1 1\ne 1 0\n1 0");
  CHECK(g.clauses == std::vector<Clause>{{{1, false}}});
}

TEST_CASE("unquantified variables") {
  CHECK_THROWS_AS(parse_qdimacs("p cnf 1 1\n1 0"), QbfError);
  // Declared but unused: bound existentially, outermost.
  Formula f = parse_qdimacs("p cnf 2 1\na 1 0\n1 0");
  REQUIRE(f.prefix.size() == 2);
  CHECK(f.prefix[0] == QuantifiedVar{Quantifier::Exists, 2});
}

TEST_CASE("malformed QDIMACS is rejected") {
  CHECK_THROWS_AS(parse_qdimacs("1 2 0"), QbfError);
  CHECK_THROWS_AS(parse_qdimacs("p cnf 1 1\ne 1 0\n2 0"), QbfError);
}

TEST_CASE("normalize pads clauses and adds a trailing universal") {
  Formula f = parse_qdimacs("p cnf 1 1\ne 1 0\n1 0");
  Formula n = normalize(f);
  CHECK(is_normalized(n));
  REQUIRE(n.prefix.size() == 2);
  CHECK(n.prefix[0] == QuantifiedVar{Quantifier::Exists, 1});
  CHECK(n.prefix[1].quantifier == Quantifier::Forall);
  CHECK(n.clauses == std::vector<Clause>{{{1, false}, {1, false}, {1, false}}});

  Formula h = normalize(parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n-1 -2 0"));
  CHECK(h.prefix.size() == 2);
  for (const auto& c : h.clauses) CHECK(c.size() == 3);
}

TEST_CASE("normalize is idempotent") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    Formula f;
    f.variable_count = 1 + static_cast<int>(rng() % 5);
    for (int v = 1; v <= f.variable_count; ++v)
      f.prefix.push_back({rng() % 2 ? Quantifier::Exists : Quantifier::Forall, v});
    int m = 1 + static_cast<int>(rng() % 4);
    for (int c = 0; c < m; ++c) {
      Clause clause;
      int len = 1 + static_cast<int>(rng() % 5);
      for (int l = 0; l < len; ++l)
        clause.push_back({1 + static_cast<int>(rng() % f.variable_count), rng() % 2 == 0});
      f.clauses.push_back(clause);
    }
    Formula once = normalize(f);
    CHECK(normalize(once) == once);
    CHECK(evaluate(once).truth == evaluate(f).truth);
  }
}

TEST_CASE("evaluate returns truth and a Skolem policy") {
  Formula t = normalize(parse_qdimacs("p cnf 1 1\ne 1 0\n1 0"));
  Evaluation e = evaluate(t);
  CHECK(e.truth);
  REQUIRE(e.policy);
  CHECK(e.policy->choose(1, {}));

  Formula f = parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 2 2 0\n-1 -2 -2 0");
  CHECK_FALSE(evaluate(f).truth);

  Formula g = parse_qdimacs("p cnf 3 3\ne 1 0\na 2 0\ne 3 0\n1 2 3 0\n1 -2 -3 0\n-1 2 3 0");
  Evaluation eg = evaluate(g);
  CHECK(eg.truth);
  REQUIRE(eg.policy);
  CHECK(eg.policy->choose(1, {}));
  CHECK(eg.policy->choose(3, {{2, false}}));
}

TEST_CASE("evaluate refuses formulas beyond its variable cap") {
  Formula f;
  f.variable_count = 30;
  for (int v = 1; v <= 30; ++v) f.prefix.push_back({Quantifier::Exists, v});
  f.clauses.push_back({{1, false}});
  CHECK_THROWS_AS(evaluate(f, 25), ResourceLimit);
}
