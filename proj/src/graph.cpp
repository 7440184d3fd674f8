#include "mapgame/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mapgame {

using ojson = nlohmann::ordered_json;

VertexId MixedGraph::add_vertex(std::string annotation) {
  VertexId v = vertex_count++;
  if (!annotation.empty()) annotations[v] = std::move(annotation);
  return v;
}

void MixedGraph::add_edge(VertexId a, VertexId b, Cost cost) {
  if (a > b) std::swap(a, b);
  edges.push_back({a, b, cost});
}

void MixedGraph::add_arc(VertexId from, VertexId to, Cost cost) { arcs.push_back({from, to, cost}); }

void MixedGraph::canonicalize() {
  for (auto& e : edges)
    if (e.a > e.b) std::swap(e.a, e.b);
  for (auto& r : required)
    if (r.kind == ElementKind::Edge && r.a > r.b) std::swap(r.a, r.b);
  auto by_ends = [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b, x.cost) < std::tie(y.a, y.b, y.cost);
  };
  std::sort(edges.begin(), edges.end(), by_ends);
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) {
    return std::tie(x.from, x.to, x.cost) < std::tie(y.from, y.to, y.cost);
  });
  std::sort(required.begin(), required.end());
}

std::optional<VertexId> MixedGraph::find(std::string_view annotation) const {
  for (const auto& [v, name] : annotations)
    if (name == annotation) return v;
  return std::nullopt;
}

VertexId MixedGraph::at(std::string_view annotation) const {
  auto v = find(annotation);
  if (!v) throw GraphError("no vertex annotated '" + std::string(annotation) + "'");
  return *v;
}

std::vector<std::string> validate(const MixedGraph& g) {
  std::vector<std::string> out;
  auto in_range = [&](VertexId v) { return v >= 0 && v < g.vertex_count; };
  if (g.vertex_count <= 0) out.push_back("graph has no vertices");
  if (!in_range(g.start)) out.push_back("start " + std::to_string(g.start) + " out of range");
  if (g.target && !in_range(*g.target))
    out.push_back("target " + std::to_string(*g.target) + " out of range");
  std::set<std::pair<VertexId, VertexId>> edge_set, arc_set;
  for (const auto& e : g.edges) {
    std::string name = "{" + std::to_string(e.a) + "," + std::to_string(e.b) + "}";
    if (!in_range(e.a) || !in_range(e.b)) out.push_back("edge " + name + " has an endpoint out of range");
    if (e.a == e.b) out.push_back("self-loop at " + std::to_string(e.a));
    if (e.cost < 0) out.push_back("edge " + name + " has negative cost");
    if (!edge_set.insert(std::minmax(e.a, e.b)).second) out.push_back("duplicate edge " + name);
  }
  for (const auto& a : g.arcs) {
    std::string name = "(" + std::to_string(a.from) + "," + std::to_string(a.to) + ")";
    if (!in_range(a.from) || !in_range(a.to)) out.push_back("arc " + name + " has an endpoint out of range");
    if (a.from == a.to) out.push_back("self-loop at " + std::to_string(a.from));
    if (a.cost < 0) out.push_back("arc " + name + " has negative cost");
    if (!arc_set.insert({a.from, a.to}).second) out.push_back("duplicate arc " + name);
  }
  for (const auto& r : g.required) {
    bool found = r.kind == ElementKind::Edge ? edge_set.count(std::minmax(r.a, r.b)) != 0
                                             : arc_set.count({r.a, r.b}) != 0;
    if (!found)
      out.push_back(std::string("unknown required element ") +
                    (r.kind == ElementKind::Edge ? "edge {" : "arc (") + std::to_string(r.a) + "," +
                    std::to_string(r.b) + (r.kind == ElementKind::Edge ? "}" : ")"));
  }
  for (const auto& [v, name] : g.annotations)
    if (!in_range(v)) out.push_back("annotation for unknown vertex " + std::to_string(v));
  return out;
}

std::string to_json(const MixedGraph& input) {
  MixedGraph g = input;
  g.canonicalize();
  ojson j;
  j["vertex_count"] = g.vertex_count;
  j["start"] = g.start;
  j["target"] = g.target ? ojson(*g.target) : ojson(nullptr);
  ojson edges = ojson::array(), arcs = ojson::array(), required = ojson::array();
  for (const auto& e : g.edges) edges.push_back({e.a, e.b, e.cost});
  for (const auto& a : g.arcs) arcs.push_back({a.from, a.to, a.cost});
  for (const auto& r : g.required) required.push_back({r.kind == ElementKind::Edge ? "edge" : "arc", r.a, r.b});
  j["edges"] = std::move(edges);
  j["arcs"] = std::move(arcs);
  j["required"] = std::move(required);
  ojson ann = ojson::object();
  for (const auto& [v, name] : g.annotations) ann[std::to_string(v)] = name;
  j["annotations"] = std::move(ann);
  return j.dump(1);
}

namespace {

template <typename T>
T field(const ojson& j, const char* key) {
  if (!j.contains(key)) throw GraphError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw GraphError(std::string("field '") + key + "' has the wrong type");
  }
}

Cost read_cost(const ojson& v) {
  if (!v.is_number_integer()) throw GraphError("cost must be an integer");
  Cost c = v.get<Cost>();
  if (c < 0) throw GraphError("negative cost " + std::to_string(c));
  return c;
}

}  // namespace

MixedGraph from_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw GraphError("graph must be a JSON object");
  MixedGraph g;
  g.vertex_count = field<int>(j, "vertex_count");
  g.start = field<int>(j, "start");
  if (j.contains("target") && !j["target"].is_null()) g.target = field<int>(j, "target");
  auto triples = [&](const char* key, auto&& sink) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw GraphError(std::string("field '") + key + "' must be an array");
    for (const auto& e : j[key]) {
      if (!e.is_array() || (e.size() != 3 && e.size() != 2) || !e[0].is_number_integer() ||
          !e[1].is_number_integer())
        throw GraphError(std::string("malformed element in '") + key + "'");
      sink(e[0].get<int>(), e[1].get<int>(), e.size() == 3 ? read_cost(e[2]) : Cost{1});
    }
  };
  triples("edges", [&](int a, int b, Cost c) { g.add_edge(a, b, c); });
  triples("arcs", [&](int a, int b, Cost c) { g.add_arc(a, b, c); });
  if (j.contains("required")) {
    for (const auto& r : j["required"]) {
      if (!r.is_array() || r.size() != 3 || !r[0].is_string())
        throw GraphError("malformed required element");
      std::string kind = r[0].get<std::string>();
      if (kind != "edge" && kind != "arc") throw GraphError("required kind must be edge or arc");
      g.required.push_back({kind == "edge" ? ElementKind::Edge : ElementKind::Arc, r[1].get<int>(),
                            r[2].get<int>()});
    }
  }
  if (j.contains("annotations")) {
    if (!j["annotations"].is_object()) throw GraphError("annotations must be an object");
    for (const auto& [key, value] : j["annotations"].items()) {
      if (!value.is_string()) throw GraphError("annotation values must be strings");
      int v;
      try {
        std::size_t used = 0;
        v = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw GraphError("annotation key '" + key + "' is not a vertex id");
      }
      g.annotations[v] = value.get<std::string>();
    }
  }
  g.canonicalize();
  return g;
}

namespace {

bool is_sink_role(const std::string& name) {
  return name == "sink" || (name.size() >= 5 && name.compare(name.size() - 5, 5, ".sink") == 0);
}

}  // namespace

std::string to_dot(const MixedGraph& g) {
  bool directed = !g.arcs.empty();
  std::set<ElementRef> required(g.required.begin(), g.required.end());
  std::ostringstream out;
  out << (directed ? "digraph" : "graph") << " G {\n";
  for (VertexId v = 0; v < g.vertex_count; ++v) {
    auto it = g.annotations.find(v);
    std::string label = std::to_string(v);
    if (it != g.annotations.end()) label += "\\n" + it->second;
    out << "  " << v << " [label=\"" << label << "\"";
    if (v == g.start) out << ", style=filled, fillcolor=palegreen";
    if (g.target && v == *g.target) out << ", shape=doublecircle";
    if (it != g.annotations.end() && is_sink_role(it->second)) out << ", shape=box, color=red, role=sink";
    out << "];\n";
  }
  auto attrs = [](Cost cost, bool req, bool undirected_in_digraph) {
    std::vector<std::string> a;
    if (cost != 1) a.push_back("label=\"" + std::to_string(cost) + "\"");
    if (req) a.push_back("color=blue, penwidth=2");
    if (undirected_in_digraph) a.push_back("dir=none");
    if (a.empty()) return std::string();
    std::string s = " [";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + a[i];
    return s + "]";
  };
  for (const auto& e : g.edges)
    out << "  " << e.a << (directed ? " -> " : " -- ") << e.b
        << attrs(e.cost, required.count({ElementKind::Edge, e.a, e.b}) != 0, directed) << ";\n";
  for (const auto& a : g.arcs)
    out << "  " << a.from << " -> " << a.to
        << attrs(a.cost, required.count({ElementKind::Arc, a.from, a.to}) != 0, false) << ";\n";
  out << "}\n";
  return out.str();
}

MixedGraph relabel(const MixedGraph& g, const std::vector<VertexId>& mapping) {
  if (static_cast<int>(mapping.size()) != g.vertex_count) throw GraphError("mapping size mismatch");
  MixedGraph h;
  h.vertex_count = g.vertex_count;
  h.start = mapping[g.start];
  if (g.target) h.target = mapping[*g.target];
  for (const auto& e : g.edges) h.add_edge(mapping[e.a], mapping[e.b], e.cost);
  for (const auto& a : g.arcs) h.add_arc(mapping[a.from], mapping[a.to], a.cost);
  for (const auto& r : g.required) h.required.push_back({r.kind, mapping[r.a], mapping[r.b]});
  for (const auto& [v, name] : g.annotations) h.annotations[mapping[v]] = name;
  h.canonicalize();
  return h;
}

std::vector<VertexId> inverse(const std::vector<VertexId>& mapping) {
  std::vector<VertexId> inv(mapping.size());
  for (std::size_t i = 0; i < mapping.size(); ++i) inv[mapping[i]] = static_cast<VertexId>(i);
  return inv;
}

Permutation permute(const MixedGraph& g, std::uint64_t seed) {
  std::vector<VertexId> mapping(g.vertex_count);
  std::iota(mapping.begin(), mapping.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(mapping.begin(), mapping.end(), rng);
  return {relabel(g, mapping), mapping};
}

Link Link::merged(const Link& o) const {
  auto pick = [](Cost a, Cost b) { return a != kNone ? a : b; };
  return {pick(edge, o.edge), pick(out, o.out), pick(in, o.in)};
}

MapIndex::MapIndex(const MixedGraph& g) : adj_(g.vertex_count) {
  std::vector<std::map<VertexId, Link>> tmp(g.vertex_count);
  for (const auto& e : g.edges) {
    tmp[e.a][e.b].edge = e.cost;
    tmp[e.b][e.a].edge = e.cost;
  }
  for (const auto& a : g.arcs) {
    tmp[a.from][a.to].out = a.cost;
    tmp[a.to][a.from].in = a.cost;
  }
  for (VertexId v = 0; v < g.vertex_count; ++v) {
    adj_[v].reserve(tmp[v].size());
    for (const auto& [u, link] : tmp[v]) adj_[v].push_back({u, link});
  }
}

Link MapIndex::link(VertexId a, VertexId b) const {
  const auto& n = adj_[a];
  auto it = std::lower_bound(n.begin(), n.end(), b,
                             [](const Neighbor& x, VertexId v) { return x.vertex < v; });
  if (it == n.end() || it->vertex != b) return {};
  return it->link;
}

}  // namespace mapgame
