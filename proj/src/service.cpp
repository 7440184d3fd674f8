#include "mapgame/service.hpp"

#include <httplib.h>

#include <random>
#include <sstream>

#include "mapgame/knowledge.hpp"
#include "mapgame/strategies.hpp"

namespace mapgame::service {

using io::json;

struct SessionStore::Session {
  std::mutex mutex;
  std::string id;
  std::shared_ptr<Game> game;
  GameState state;
  Transcript transcript;
  std::string human_role;
  std::string engine_opponent;
  std::string warning;
  std::unique_ptr<solver::SearcherStrategy> engine_searcher;
  std::unique_ptr<solver::AdversaryPolicy> engine_adversary;

  bool human_to_act() const {
    if (state.turn == Turn::Terminal) return false;
    return (state.turn == Turn::SearcherToMove) == (human_role == "searcher");
  }

  void engine_play() {
    while (state.turn != Turn::Terminal && !human_to_act()) {
      if (state.turn == Turn::SearcherToMove) {
        Move m = engine_searcher->choose(*game, state);
        state = game->apply_move(state, m);
        transcript.push_back(m);
      } else {
        Reveal r = engine_adversary->choose(*game, state);
        state = game->apply_reveal(state, r);
        transcript.push_back(r);
      }
    }
  }

  json view() const {
    json j;
    j["id"] = id;
    j["human_role"] = human_role;
    j["engine_opponent"] = engine_opponent;
    if (!warning.empty()) j["warning"] = warning;
    j["map"] = json::parse(to_json(game->map()));
    j["spec"] = io::spec_to_json(game->spec());
    j["state"] = io::state_view(state);
    j["status"] = to_string(state.outcome);
    j["turn"] = to_string(state.turn);
    if (state.turn == Turn::SearcherToMove) {
      json moves = json::array();
      for (const auto& m : game->searcher_moves(state)) moves.push_back(io::move_to_json(m));
      j["legal_moves"] = std::move(moves);
    } else if (state.turn == Turn::AdversaryToReveal && human_role == "adversary") {
      json reveals = json::array();
      for (const auto& r : knowledge::enumerate_reveals(state, *game)) reveals.push_back(io::reveal_to_json(r));
      j["legal_reveals"] = std::move(reveals);
    }
    j["transcript"] = io::transcript_to_json(transcript);
    return j;
  }
};

namespace {

Response error(int status, const std::string& message, json details = nullptr) {
  json body{{"error", message}};
  if (!details.is_null()) body["violations"] = std::move(details);
  return {status, std::move(body)};
}

std::string field(const json& j, const char* snake, const char* kebab, const std::string& fallback) {
  if (j.contains(snake) && j[snake].is_string()) return j[snake].get<std::string>();
  if (j.contains(kebab) && j[kebab].is_string()) return j[kebab].get<std::string>();
  return fallback;
}

std::string fresh_token() {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  std::ostringstream ss;
  ss << std::hex << rng();
  return ss.str();
}

}  // namespace

SessionStore::SessionStore(ServiceOptions options) : options_(options) {}
SessionStore::~SessionStore() = default;

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response SessionStore::create(const json& request) {
  if (!request.is_object() || !request.contains("map")) return error(400, "request needs a 'map' object");
  auto session = std::make_shared<Session>();
  session->human_role = field(request, "human_role", "human-role", "searcher");
  session->engine_opponent = field(request, "engine_opponent", "engine-opponent", "sink-seeking");
  if (session->human_role != "searcher" && session->human_role != "adversary")
    return error(400, "human_role must be searcher or adversary");
  const auto& opp = session->engine_opponent;
  if (opp != "optimal" && opp != "sink-seeking" && opp != "first-consistent")
    return error(400, "engine_opponent must be optimal, sink-seeking or first-consistent");

  MixedGraph map;
  GameSpec spec;
  try {
    map = from_json(request["map"].dump());
  } catch (const GraphError& e) {
    return error(422, e.what());
  }
  if (auto v = validate(map); !v.empty()) return error(422, "invalid map", v);
  try {
    spec = request.contains("spec") && !request["spec"].is_null() ? io::spec_from_json(request["spec"], map)
                                                                  : io::default_spec(map);
  } catch (const io::IoError& e) {
    return error(422, e.what());
  }
  if (auto v = check_spec(map, spec); !v.empty()) return error(422, "invalid game spec", v);
  try {
    session->game = std::make_shared<Game>(std::move(map), spec);
  } catch (const GameError& e) {
    return error(422, e.what());
  }
  const Game& game = *session->game;
  const bool human_searcher = session->human_role == "searcher";

  bool optimal_ready = false;
  if (opp == "optimal") {
    solver::Limits limits;
    limits.max_states = options_.presolve_states;
    limits.max_seconds = options_.presolve_seconds;
    auto result = solver::solve(game, limits);
    if (result.value != solver::Value::ResourceLimit) {
      if (human_searcher) session->engine_adversary = solver::extract_adversary_policy(result);
      else session->engine_searcher = solver::extract_searcher_strategy(result);
      optimal_ready = true;
    } else {
      session->engine_opponent = "sink-seeking";
      session->warning = "pre-solve exceeded its limits; the engine plays sink-seeking instead of optimal";
    }
  }
  if (!optimal_ready) {
    // Searcher-side engines mirror the adversary names: sink-seeking maps to
    // depth-first exploration, first-consistent to the first legal move.
    const bool first = session->engine_opponent == "first-consistent";
    if (human_searcher) session->engine_adversary = strategies::make_policy(first ? "first" : "sink-seeking");
    else session->engine_searcher = strategies::make_strategy(first ? "first" : "dfs");
  }

  session->state = game.new_game();
  try {
    session->engine_play();
  } catch (const std::exception& e) {
    return error(500, std::string("engine failed: ") + e.what());
  }
  {
    std::lock_guard lock(mutex_);
    do session->id = fresh_token() + std::to_string(next_id_++);
    while (sessions_.count(session->id));
    sessions_[session->id] = session;
  }
  std::lock_guard lock(session->mutex);
  return {201, session->view()};
}

Response SessionStore::get(const std::string& id) {
  auto session = find(id);
  if (!session) return error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  return {200, session->view()};
}

Response SessionStore::step(const std::string& id, const json& request) {
  auto session = find(id);
  if (!session) return error(404, "unknown session");
  Step step;
  try {
    step = io::step_from_json(request);
  } catch (const io::IoError& e) {
    return error(400, e.what());
  }
  std::lock_guard lock(session->mutex);
  if (session->state.turn == Turn::Terminal) return error(409, "game is over");
  if (!session->human_to_act()) return error(409, "not the human's turn");
  const bool is_move = std::holds_alternative<Move>(step);
  if (is_move != (session->human_role == "searcher")) return error(409, "step does not match the human's role");
  try {
    session->state = is_move ? session->game->apply_move(session->state, std::get<Move>(step))
                             : session->game->apply_reveal(session->state, std::get<Reveal>(step));
  } catch (const GameError& e) {
    return error(409, e.what());
  }
  session->transcript.push_back(step);
  try {
    session->engine_play();
  } catch (const std::exception& e) {
    return error(500, std::string("engine failed: ") + e.what());
  }
  return {200, session->view()};
}

Response SessionStore::remove(const std::string& id) {
  std::lock_guard lock(mutex_);
  if (!sessions_.erase(id)) return error(404, "unknown session");
  return {200, json{{"deleted", id}}};
}

struct HttpServer::Impl {
  SessionStore store;
  httplib::Server server;
  explicit Impl(ServiceOptions o) : store(o) {}
};

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
  try {
    return json::parse(req.body.empty() ? std::string("{}") : req.body);
  } catch (const json::parse_error& e) {
    reply(res, error(400, std::string("invalid JSON: ") + e.what()));
    return std::nullopt;
  }
}

}  // namespace

HttpServer::HttpServer(ServiceOptions options) : impl_(std::make_unique<Impl>(options)) {
  auto& srv = impl_->server;
  auto& store = impl_->store;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
    if (auto body = parse_body(req, res)) reply(res, store.create(*body));
  });
  srv.Get(R"(/sessions/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    reply(res, store.get(req.matches[1]));
  });
  srv.Post(R"(/sessions/([^/]+)/step)", [&store](const httplib::Request& req, httplib::Response& res) {
    if (auto body = parse_body(req, res)) reply(res, store.step(req.matches[1], *body));
  });
  srv.Delete(R"(/sessions/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    reply(res, store.remove(req.matches[1]));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace mapgame::service
