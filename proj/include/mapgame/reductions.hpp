#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "mapgame/game.hpp"
#include "mapgame/io.hpp"
#include "mapgame/qbf.hpp"

namespace mapgame::reductions {

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Provenance {
  std::string reduction;  // e.g. "stpath-u"
  std::string base;       // reduction of the source instance for derived ones
  std::string formula_digest;
  std::string formula_text;
  std::map<std::string, long long> constants;  // k, M1, M2 where used
};

struct GameInstance {
  MixedGraph graph;
  GameSpec spec;
  Provenance provenance;
};

io::json provenance_to_json(const Provenance& p);
Provenance provenance_from_json(const io::json& j);
io::Instance to_instance(const GameInstance& gi);
GameInstance from_instance(const io::Instance& inst);

struct WalkConstants {
  long long m2, k, m1;
};
// Budget of the directed shortest-walk construction.
long long directed_walk_budget(int n, int m);
WalkConstants undirected_walk_constants(int n, int m);

GameInstance build_stpath_undirected(const qbf::Formula& f);
GameInstance build_stpath_directed(const qbf::Formula& f);
GameInstance build_sttrail_undirected(const qbf::Formula& f);
GameInstance build_shortest_walk_directed(const qbf::Formula& f);
GameInstance build_shortest_walk_undirected(const qbf::Formula& f);
GameInstance expand_unit_costs(const GameInstance& gi);
GameInstance build_ham_path_undirected(const qbf::Formula& f);
GameInstance build_ham_path_directed(const qbf::Formula& f);
GameInstance build_ham_cycle(const qbf::Formula& f, bool directed);
GameInstance build_stacker_crane(const qbf::Formula& f);
GameInstance build_rural_postman(const qbf::Formula& f);

enum class ThresholdKind { LongestPath, LongestCycle, MetricTsp, BottleneckTsp };
ThresholdKind parse_threshold_kind(const std::string& s);
GameInstance derive_threshold_variants(const GameInstance& gi, ThresholdKind kind);

// Builds by CLI variant name (stpath-u, ham-d, metric-tsp, ...).
GameInstance build_variant(const std::string& variant, const qbf::Formula& f);
const std::vector<std::string>& variant_names();

}  // namespace mapgame::reductions
