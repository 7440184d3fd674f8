#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mapgame {

using VertexId = int;
using Cost = std::int64_t;

enum class ElementKind { Edge, Arc };

struct Edge {
  VertexId a = 0, b = 0;
  Cost cost = 1;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Arc {
  VertexId from = 0, to = 0;
  Cost cost = 1;
  friend bool operator==(const Arc&, const Arc&) = default;
};

// An edge {a,b} is stored with a < b; an arc keeps its orientation.
struct ElementRef {
  ElementKind kind = ElementKind::Edge;
  VertexId a = 0, b = 0;
  friend auto operator<=>(const ElementRef&, const ElementRef&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MixedGraph {
  int vertex_count = 0;
  std::vector<Edge> edges;
  std::vector<Arc> arcs;
  VertexId start = 0;
  std::optional<VertexId> target;
  std::vector<ElementRef> required;
  std::map<VertexId, std::string> annotations;

  VertexId add_vertex(std::string annotation = {});
  void add_edge(VertexId a, VertexId b, Cost cost = 1);
  void add_arc(VertexId from, VertexId to, Cost cost = 1);
  // Sorts element lists into canonical order.
  void canonicalize();
  // Vertex carrying the given annotation, if any.
  std::optional<VertexId> find(std::string_view annotation) const;
  VertexId at(std::string_view annotation) const;

  friend bool operator==(const MixedGraph&, const MixedGraph&) = default;
};

// Empty iff all invariants hold.
std::vector<std::string> validate(const MixedGraph& g);

std::string to_json(const MixedGraph& g);
MixedGraph from_json(std::string_view text);
std::string to_dot(const MixedGraph& g);

struct Permutation {
  MixedGraph graph;
  std::vector<VertexId> mapping;  // old id -> new id
};

Permutation permute(const MixedGraph& g, std::uint64_t seed);
MixedGraph relabel(const MixedGraph& g, const std::vector<VertexId>& mapping);
std::vector<VertexId> inverse(const std::vector<VertexId>& mapping);

// Relation of an ordered vertex pair seen from the first vertex. Absent parts
// hold kNone; present parts hold the element cost.
struct Link {
  static constexpr Cost kNone = -1;
  Cost edge = kNone;
  Cost out = kNone;
  Cost in = kNone;

  bool empty() const { return edge == kNone && out == kNone && in == kNone; }
  bool traversable() const { return edge != kNone || out != kNone; }
  Link reversed() const { return {edge, in, out}; }
  Link without_in() const { return {edge, out, kNone}; }
  Link merged(const Link& o) const;
  friend auto operator<=>(const Link&, const Link&) = default;
};

struct Neighbor {
  VertexId vertex = 0;
  Link link;
};

// Adjacency view of a map, with neighbors sorted by vertex id.
class MapIndex {
 public:
  explicit MapIndex(const MixedGraph& g);
  int vertex_count() const { return static_cast<int>(adj_.size()); }
  std::span<const Neighbor> neighbors(VertexId v) const { return adj_[v]; }
  Link link(VertexId a, VertexId b) const;
  int degree(VertexId v) const { return static_cast<int>(adj_[v].size()); }

 private:
  std::vector<std::vector<Neighbor>> adj_;
};

}  // namespace mapgame
