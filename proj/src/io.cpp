#include "mapgame/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mapgame::io {

json link_to_json(const Link& l) {
  json j = json::object();
  if (l.edge != Link::kNone) j["edge"] = l.edge;
  if (l.out != Link::kNone) j["out"] = l.out;
  if (l.in != Link::kNone) j["in"] = l.in;
  return j;
}

Link link_from_json(const json& j) {
  if (!j.is_object()) throw IoError("link must be an object");
  Link l;
  auto read = [&](const char* key, Cost& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer() || j[key].get<Cost>() < 0) throw IoError(std::string("bad link cost '") + key + "'");
    dst = j[key].get<Cost>();
  };
  read("edge", l.edge);
  read("out", l.out);
  read("in", l.in);
  return l;
}

json spec_to_json(const GameSpec& s) {
  json j;
  j["constraint"] = to_string(s.constraint);
  j["objective"] = to_string(s.objective);
  if (s.objective == Objective::VisitAtLeast) {
    j["min_visits"] = s.min_visits;
    j["closed_tour"] = s.closed_tour;
  }
  j["budget"] = s.budget ? json(*s.budget) : json(nullptr);
  j["budget_mode"] = to_string(s.budget_mode);
  j["reveal_in_arcs"] = s.reveal_in_arcs;
  return j;
}

GameSpec spec_from_json(const json& j, const MixedGraph& map) {
  if (!j.is_object()) throw IoError("game spec must be an object");
  GameSpec s;
  try {
    s.constraint = parse_constraint(j.value("constraint", std::string("path")));
    s.objective = parse_objective(j.value("objective", std::string("reach-target")));
    s.min_visits = j.value("min_visits", 0);
    s.closed_tour = j.value("closed_tour", false);
    if (j.contains("budget") && !j["budget"].is_null()) {
      if (!j["budget"].is_number_integer()) throw IoError("budget must be an integer");
      s.budget = j["budget"].get<Cost>();
    }
    s.budget_mode = parse_budget_mode(j.value("budget_mode", std::string("sum")));
    s.reveal_in_arcs = j.value("reveal_in_arcs", true);
  } catch (const GameError& e) {
    throw IoError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed game spec: ") + e.what());
  }
  s.map_vertex_count = map.vertex_count;
  return s;
}

GameSpec default_spec(const MixedGraph& map) {
  GameSpec s;
  s.objective = map.target ? Objective::ReachTarget : Objective::VisitAllAndReturn;
  s.map_vertex_count = map.vertex_count;
  return s;
}

json move_to_json(const Move& m) {
  return json{{"to", m.to}, {"via", m.via == ElementKind::Edge ? "edge" : "arc"}};
}

Move move_from_json(const json& j) {
  if (!j.is_object() || !j.contains("to") || !j["to"].is_number_integer()) throw IoError("move needs an integer 'to'");
  Move m;
  m.to = j["to"].get<int>();
  std::string via = j.value("via", std::string("edge"));
  if (via != "edge" && via != "arc") throw IoError("move 'via' must be edge or arc");
  m.via = via == "edge" ? ElementKind::Edge : ElementKind::Arc;
  return m;
}

json reveal_to_json(const Reveal& r) {
  json known = json::array(), fresh = json::array();
  for (const auto& k : r.known) known.push_back({{"label", k.label}, {"link", link_to_json(k.link)}});
  for (const auto& f : r.fresh)
    fresh.push_back({{"link", link_to_json(f.link)}, {"target", f.is_target}, {"count", f.count}});
  return json{{"known", known}, {"fresh", fresh}};
}

Reveal reveal_from_json(const json& j) {
  if (!j.is_object()) throw IoError("reveal must be an object");
  Reveal r;
  try {
    for (const auto& k : j.value("known", json::array())) {
      r.known.push_back({k.at("label").get<int>(), link_from_json(k.at("link"))});
    }
    for (const auto& f : j.value("fresh", json::array())) {
      FreshGroup g;
      g.link = link_from_json(f.at("link"));
      g.is_target = f.value("target", false);
      g.count = f.value("count", 1);
      if (g.count < 1) throw IoError("fresh group count must be positive");
      r.fresh.push_back(g);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed reveal: ") + e.what());
  }
  std::sort(r.known.begin(), r.known.end());
  std::sort(r.fresh.begin(), r.fresh.end());
  return r;
}

json step_to_json(const Step& s) {
  if (const auto* m = std::get_if<Move>(&s)) return json{{"move", move_to_json(*m)}};
  return json{{"reveal", reveal_to_json(std::get<Reveal>(s))}};
}

Step step_from_json(const json& j) {
  if (j.is_object() && j.contains("move")) return move_from_json(j["move"]);
  if (j.is_object() && j.contains("reveal")) return reveal_from_json(j["reveal"]);
  throw IoError("step must hold a 'move' or a 'reveal'");
}

json transcript_to_json(const Transcript& t) {
  json j = json::array();
  for (const auto& s : t) j.push_back(step_to_json(s));
  return j;
}

Transcript transcript_from_json(const json& j) {
  if (!j.is_array()) throw IoError("transcript must be an array");
  Transcript t;
  for (const auto& s : j) t.push_back(step_from_json(s));
  return t;
}

json state_view(const GameState& s) {
  json labels = json::array();
  for (LabelId l = 0; l < s.label_count(); ++l) {
    const auto& o = s.labels[l];
    labels.push_back({{"label", l},
                      {"start", o.is_start},
                      {"target", o.is_target},
                      {"visited", o.visited},
                      {"closed", o.closed},
                      {"current", l == s.current}});
  }
  json links = json::array();
  for (LabelId a = 0; a < s.label_count(); ++a)
    for (const auto& k : s.adjacency[a])
      if (a < k.label) links.push_back({{"a", a}, {"b", k.label}, {"link", link_to_json(k.link)}});
  json used = json::array();
  for (const auto& u : s.used)
    used.push_back({{"a", u.a}, {"b", u.b}, {"kind", u.kind == ElementKind::Edge ? "edge" : "arc"}});
  json j;
  j["labels"] = std::move(labels);
  j["links"] = std::move(links);
  j["used"] = std::move(used);
  j["visit_order"] = s.visit_order;
  j["current"] = s.current;
  j["moves"] = s.moves;
  j["cost_spent"] = s.cost_spent;
  j["turn"] = to_string(s.turn);
  j["outcome"] = to_string(s.outcome);
  return j;
}

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw IoError("instance must be a JSON object");
  std::optional<json> game;
  if (j.contains("game")) {
    game = j["game"];
    j.erase("game");
  }
  Instance inst;
  try {
    inst.map = from_json(j.dump());
  } catch (const GraphError& e) {
    throw IoError(e.what());
  }
  inst.spec = game ? spec_from_json(*game, inst.map) : default_spec(inst.map);
  return inst;
}

std::string instance_to_text(const MixedGraph& map, const GameSpec& spec) {
  json j = json::parse(to_json(map));
  j["game"] = spec_to_json(spec);
  return j.dump(1) + "\n";
}

std::string sidecar_path(const std::string& instance_path) {
  const std::string suffix = ".mg.json";
  if (instance_path.size() > suffix.size() &&
      instance_path.compare(instance_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return instance_path.substr(0, instance_path.size() - suffix.size()) + ".prov.json";
  return instance_path + ".prov.json";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

Instance load_instance(const std::string& path) {
  Instance inst = parse_instance(read_file(path));
  std::ifstream side(sidecar_path(path));
  if (side) {
    try {
      inst.provenance = json::parse(side);
    } catch (const nlohmann::json::parse_error& e) {
      throw IoError("invalid provenance sidecar: " + std::string(e.what()));
    }
  }
  return inst;
}

void save_instance(const std::string& path, const Instance& inst) {
  write_file(path, instance_to_text(inst.map, inst.spec));
  if (inst.provenance) write_file(sidecar_path(path), inst.provenance->dump(1) + "\n");
}

}  // namespace mapgame::io
