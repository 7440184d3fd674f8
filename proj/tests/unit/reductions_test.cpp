#include <doctest.h>

#include "mapgame/qbf.hpp"
#include "mapgame/reductions.hpp"

using namespace mapgame;
using namespace mapgame::reductions;

namespace {

// ∃x1 (x1,x1,x1): n = 1, m = 1.
qbf::Formula one_var() { return qbf::parse_qdimacs("p cnf 1 1\ne 1 0\n1 1 1 0"); }

// ∃x1 ∀x2 ∃x3 with three clauses; already alternating with 3-literal clauses.
qbf::Formula three_var() {
  return qbf::parse_qdimacs("p cnf 3 3\ne 1 0\na 2 0\ne 3 0\n1 2 3 0\n1 -2 -3 0\n-1 2 3 0");
}

bool has_edge(const MixedGraph& g, const std::string& a, const std::string& b) {
  VertexId x = g.at(a), y = g.at(b);
  return std::any_of(g.edges.begin(), g.edges.end(), [&](const Edge& e) {
    return (e.a == x && e.b == y) || (e.a == y && e.b == x);
  });
}

bool has_arc(const MixedGraph& g, const std::string& a, const std::string& b) {
  VertexId x = g.at(a), y = g.at(b);
  return std::any_of(g.arcs.begin(), g.arcs.end(), [&](const Arc& e) { return e.from == x && e.to == y; });
}

}  // namespace

TEST_CASE("undirected s-t path build") {
  auto small = build_stpath_undirected(one_var());
  CHECK(small.graph.vertex_count == 45);
  CHECK(validate(small.graph).empty());

  auto wide = build_stpath_undirected(three_var());
  CHECK(wide.graph.vertex_count == 131);
  CHECK(has_edge(wide.graph, "x1.p2", "x1.v"));
  CHECK_FALSE(has_edge(wide.graph, "x2.p2", "x2.v"));
  CHECK(has_edge(wide.graph, "x3.p2", "x3.v"));
}

TEST_CASE("directed s-t path build") {
  auto gi = build_stpath_directed(one_var());
  const auto& g = gi.graph;
  CHECK(has_arc(g, "x1.u2", "x1.u3"));
  CHECK(has_arc(g, "x1.u3", "x1.u2"));
  std::vector<int> in(g.vertex_count), out(g.vertex_count);
  for (const auto& a : g.arcs) ++out[a.from], ++in[a.to];
  for (const auto& [v, role] : g.annotations)
    if (role.size() >= 5 && role.substr(role.size() - 5) == ".sink") {
      CHECK(in[v] >= 1);
      CHECK(out[v] == 0);
    }
  CHECK(out[g.at("c1.c2")] == 1);
}

TEST_CASE("undirected s-t trail build") {
  auto gi = build_sttrail_undirected(one_var());
  CHECK(gi.graph.vertex_count == 49);
  CHECK(validate(gi.graph).empty());
  CHECK(has_edge(gi.graph, "x1.q2", "x1.v"));
  for (int j = 1; j <= 4; ++j) CHECK(has_edge(gi.graph, "x1.q" + std::to_string(j), "x1.q" + std::to_string(j) + ".sink"));
}

TEST_CASE("walk constants") {
  CHECK(directed_walk_budget(1, 1) == 22);
  CHECK(directed_walk_budget(2, 3) == 47);
  auto c = undirected_walk_constants(1, 1);
  CHECK(c.m2 == 80);
  CHECK(c.k == 179);
  CHECK(c.m1 == 1790);
  auto d = undirected_walk_constants(3, 3);
  CHECK(d.m2 == 240);
  CHECK(d.k == 1495);
  CHECK(d.m1 == 14950);

  auto unit = expand_unit_costs(build_shortest_walk_undirected(one_var()));
  for (const auto& e : unit.graph.edges) CHECK(e.cost == 1);
  for (const auto& a : unit.graph.arcs) CHECK(a.cost == 1);
  REQUIRE(unit.spec.budget);
  CHECK(*unit.spec.budget == 179);
}

TEST_CASE("Hamiltonian builds") {
  auto two = qbf::parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 -2 1 0\n-1 2 2 0");
  CHECK(build_ham_path_undirected(two).graph.vertex_count == 72);

  auto gi = build_ham_path_undirected(three_var());
  const auto& g = gi.graph;
  CHECK(g.vertex_count == 3 * (10 + 12 * 3) + 3 + 2);
  // Clause 2 holds ¬x2: attachment at v_{4k-2} and w_{4k-1} with k = 2.
  CHECK(has_edge(g, "c2", "x2.v6"));
  CHECK(has_edge(g, "c2", "x2.w7"));
  for (int j = 1; j <= 12; ++j) {
    bool linked = has_edge(g, "x1.u6", "x1.m" + std::to_string(j));
    CHECK(linked == (j % 4 == 2 || j % 4 == 3));
  }

  auto d = build_ham_path_directed(three_var());
  for (int j = 1; j <= 12; ++j) {
    std::string v = "x1.v" + std::to_string(j), m = "x1.m" + std::to_string(j), w = "x1.w" + std::to_string(j);
    CHECK(has_arc(d.graph, v, m));
    CHECK(has_arc(d.graph, m, v));
    CHECK(has_arc(d.graph, m, w));
    CHECK(has_arc(d.graph, w, m));
  }
}

TEST_CASE("cycle, stacker crane and rural postman builds") {
  auto cyc = build_ham_cycle(one_var(), false);
  VertexId s = cyc.graph.start;
  int s_degree = 0;
  for (const auto& e : cyc.graph.edges) s_degree += e.a == s || e.b == s;
  CHECK(s_degree == 4);

  auto dcyc = build_ham_cycle(one_var(), true);
  int into_start = 0;
  for (const auto& a : dcyc.graph.arcs) into_start += a.to == dcyc.graph.start;
  CHECK(into_start == 1);

  auto stacker = build_stacker_crane(one_var());
  CHECK(stacker.graph.vertex_count == 45);
  CHECK(stacker.graph.arcs.size() == 1);
  REQUIRE(stacker.graph.required.size() == 1);
  CHECK(stacker.graph.required[0].kind == ElementKind::Arc);
  CHECK(validate(stacker.graph).empty());

  auto rural = build_rural_postman(one_var());
  CHECK(rural.graph.vertex_count == 57);
  CHECK(rural.graph.required.size() == 1);
  VertexId v = rural.graph.at("rural.v");
  int v_degree = 0;
  for (const auto& e : rural.graph.edges) v_degree += e.a == v || e.b == v;
  CHECK(v_degree == 2);
}

TEST_CASE("threshold variants") {
  auto base = build_ham_path_undirected(qbf::parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 -2 1 0\n-1 2 2 0"));
  auto cyc = build_ham_cycle(qbf::parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 -2 1 0\n-1 2 2 0"), false);
  auto metric = derive_threshold_variants(cyc, parse_threshold_kind("metric-tsp"));
  long long n = metric.graph.vertex_count;
  CHECK(static_cast<long long>(metric.graph.edges.size()) == n * (n - 1) / 2);

  auto bottleneck = derive_threshold_variants(cyc, parse_threshold_kind("bottleneck-tsp"));
  CHECK(bottleneck.spec.budget_mode == BudgetMode::Max);
  REQUIRE(bottleneck.spec.budget);
  for (const auto& e : bottleneck.graph.edges)
    if (e.cost == 2) CHECK(e.cost > *bottleneck.spec.budget);

  auto longest = derive_threshold_variants(base, parse_threshold_kind("longest-path"));
  REQUIRE(longest.spec.objective == Objective::VisitAtLeast);
  CHECK(longest.spec.min_visits == longest.graph.vertex_count);
}

TEST_CASE("instances round-trip with provenance") {
  auto gi = build_stpath_undirected(one_var());
  auto back = from_instance(to_instance(gi));
  CHECK(back.graph == gi.graph);
  CHECK(back.spec == gi.spec);
  CHECK(back.provenance.formula_digest == gi.provenance.formula_digest);
  CHECK(from_json(to_json(gi.graph)) == gi.graph);
  CHECK_THROWS_AS(build_variant("no-such-variant", one_var()), ReductionError);
}
