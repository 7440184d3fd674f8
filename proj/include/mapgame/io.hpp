#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "mapgame/game.hpp"

namespace mapgame::io {

using json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json link_to_json(const Link& l);
Link link_from_json(const json& j);

json spec_to_json(const GameSpec& s);
// map_vertex_count is taken from the map.
GameSpec spec_from_json(const json& j, const MixedGraph& map);
// Reach-target path game when the map has a target, otherwise visit-all-and-return.
GameSpec default_spec(const MixedGraph& map);

json move_to_json(const Move& m);
Move move_from_json(const json& j);
json reveal_to_json(const Reveal& r);
Reveal reveal_from_json(const json& j);
json step_to_json(const Step& s);
Step step_from_json(const json& j);
json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const json& j);

// The searcher's observation only: labels, known links, used elements.
json state_view(const GameState& s);

struct Instance {
  MixedGraph map;
  GameSpec spec;
  std::optional<json> provenance;
};

// Instance text is the map JSON with an optional top-level "game" object.
Instance parse_instance(const std::string& text);
std::string instance_to_text(const MixedGraph& map, const GameSpec& spec);

std::string sidecar_path(const std::string& instance_path);
Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace mapgame::io
