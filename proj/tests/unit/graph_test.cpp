#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "mapgame/graph.hpp"

using namespace mapgame;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

MixedGraph random_graph(std::mt19937_64& rng) {
  MixedGraph g;
  int n = 2 + static_cast<int>(rng() % 7);
  for (int i = 0; i < n; ++i) g.add_vertex();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      auto r = rng() % 4;
      if (r == 0) g.add_edge(a, b, static_cast<Cost>(rng() % 5));
      else if (r == 1) g.add_arc(a, b, static_cast<Cost>(rng() % 5));
      else if (r == 2) g.add_arc(b, a, static_cast<Cost>(rng() % 5));
    }
  g.start = 0;
  g.canonicalize();
  return g;
}

}  // namespace

TEST_CASE("validate") {
  CHECK(validate(fixtures::triangle()).empty());

  MixedGraph loop;
  loop.vertex_count = 1;
  loop.edges.push_back({0, 0, 1});
  CHECK(mentions(validate(loop), "self-loop at 0"));

  MixedGraph req = fixtures::triangle();
  req.vertex_count = 4;
  req.required.push_back({ElementKind::Edge, 0, 3});
  CHECK(mentions(validate(req), "unknown required element"));
}

TEST_CASE("JSON round trip") {
  MixedGraph tri = fixtures::triangle();
  CHECK(from_json(to_json(tri)) == tri);
  CHECK(to_json(from_json(to_json(tri))) == to_json(tri));

  MixedGraph ann = fixtures::fork();
  ann.annotations[2] = "sink";
  ann.canonicalize();
  CHECK(from_json(to_json(ann)) == ann);

  CHECK_THROWS_AS(from_json(R"({"vertex_count":2,"start":0,"edges":[[0,1,-1]],"arcs":[]})"), GraphError);
  CHECK_THROWS_AS(from_json("not json"), GraphError);
}

TEST_CASE("DOT export") {
  std::string dot = to_dot(fixtures::triangle());
  auto count = [&](const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = dot.find(needle, pos)) != std::string::npos) ++n, pos += needle.size();
    return n;
  };
  CHECK(count(" -- ") == 3);
  CHECK(count(" -> ") == 0);

  MixedGraph arc;
  arc.vertex_count = 2;
  arc.add_arc(0, 1);
  CHECK(to_dot(arc).find("0 -> 1") != std::string::npos);

  MixedGraph sink = fixtures::line3();
  sink.annotations[1] = "sink";
  std::string sd = to_dot(sink);
  CHECK(sd != to_dot(fixtures::line3()));
  CHECK(sd.find("sink") != std::string::npos);
}

TEST_CASE("permute preserves structure and inverts") {
  auto p = permute(fixtures::triangle(), 0);
  std::vector<VertexId> sorted = p.mapping;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<VertexId>{0, 1, 2});
  CHECK(p.graph.edges.size() == 3);
  CHECK(relabel(p.graph, inverse(p.mapping)) == fixtures::triangle());

  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    MixedGraph g = random_graph(rng);
    auto q = permute(g, rng());
    CHECK(q.graph.edges.size() == g.edges.size());
    CHECK(q.graph.arcs.size() == g.arcs.size());
    auto degrees = [](const MixedGraph& h) {
      MapIndex idx(h);
      std::vector<int> d;
      for (int v = 0; v < h.vertex_count; ++v) d.push_back(idx.degree(v));
      std::sort(d.begin(), d.end());
      return d;
    };
    CHECK(degrees(q.graph) == degrees(g));
    auto costs = [](const MixedGraph& h) {
      std::vector<Cost> c;
      for (const auto& e : h.edges) c.push_back(e.cost);
      for (const auto& a : h.arcs) c.push_back(a.cost);
      std::sort(c.begin(), c.end());
      return c;
    };
    CHECK(costs(q.graph) == costs(g));
    CHECK(relabel(q.graph, inverse(q.mapping)) == g);
  }
}
