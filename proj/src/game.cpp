#include "mapgame/game.hpp"

#include <algorithm>

#include "mapgame/knowledge.hpp"

namespace mapgame {

std::string to_string(Constraint c) {
  switch (c) {
    case Constraint::Path: return "path";
    case Constraint::Trail: return "trail";
    case Constraint::Walk: return "walk";
  }
  return "?";
}

std::string to_string(Objective o) {
  switch (o) {
    case Objective::ReachTarget: return "reach-target";
    case Objective::VisitAll: return "visit-all-vertices";
    case Objective::VisitAllAndReturn: return "visit-all-and-return";
    case Objective::VisitAtLeast: return "visit-at-least";
    case Objective::TraverseRequired: return "traverse-required";
  }
  return "?";
}

std::string to_string(BudgetMode m) { return m == BudgetMode::Sum ? "sum" : "max"; }

std::string to_string(Turn t) {
  switch (t) {
    case Turn::AdversaryToReveal: return "adversary-to-reveal";
    case Turn::SearcherToMove: return "searcher-to-move";
    case Turn::Terminal: return "terminal";
  }
  return "?";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Ongoing: return "ongoing";
    case Outcome::SearcherWin: return "searcher-win";
    case Outcome::SearcherLoss: return "searcher-loss";
  }
  return "?";
}

Constraint parse_constraint(const std::string& s) {
  for (auto c : {Constraint::Path, Constraint::Trail, Constraint::Walk})
    if (to_string(c) == s) return c;
  throw GameError("unknown constraint '" + s + "'");
}

Objective parse_objective(const std::string& s) {
  for (auto o : {Objective::ReachTarget, Objective::VisitAll, Objective::VisitAllAndReturn,
                 Objective::VisitAtLeast, Objective::TraverseRequired})
    if (to_string(o) == s) return o;
  throw GameError("unknown objective '" + s + "'");
}

BudgetMode parse_budget_mode(const std::string& s) {
  if (s == "sum") return BudgetMode::Sum;
  if (s == "max") return BudgetMode::Max;
  throw GameError("unknown budget mode '" + s + "'");
}

Link GameState::known(LabelId a, LabelId b) const {
  const auto& list = adjacency[a];
  auto it = std::lower_bound(list.begin(), list.end(), b,
                             [](const KnownLink& k, LabelId v) { return k.label < v; });
  if (it == list.end() || it->label != b) return {};
  return it->link;
}

bool GameState::is_used(const UsedElement& e) const {
  return std::binary_search(used.begin(), used.end(), e);
}

int Reveal::fresh_units() const {
  int n = 0;
  for (const auto& g : fresh) n += g.count;
  return n;
}

std::vector<std::string> check_spec(const MixedGraph& map, const GameSpec& spec) {
  std::vector<std::string> out;
  if (spec.map_vertex_count != map.vertex_count)
    out.push_back("spec map-vertex-count " + std::to_string(spec.map_vertex_count) +
                  " differs from map size " + std::to_string(map.vertex_count));
  bool needs_target = spec.objective == Objective::ReachTarget || spec.objective == Objective::VisitAll;
  if (needs_target && !map.target) out.push_back(to_string(spec.objective) + " requires a target mark");
  if (map.target && *map.target == map.start && !spec.cyclic())
    out.push_back("target coincides with start");
  if (spec.objective == Objective::VisitAtLeast &&
      (spec.min_visits < 1 || spec.min_visits > map.vertex_count))
    out.push_back("visit-at-least(" + std::to_string(spec.min_visits) + ") outside 1.." +
                  std::to_string(map.vertex_count));
  if (spec.budget && *spec.budget < 0) out.push_back("negative budget");
  return out;
}

Game::Game(MixedGraph map, GameSpec spec) : map_(std::move(map)), spec_(spec), index_(map_) {
  auto violations = validate(map_);
  if (!violations.empty()) throw GameError("invalid map: " + violations.front());
  auto mismatch = check_spec(map_, spec_);
  if (!mismatch.empty()) throw GameError("spec/map mismatch: " + mismatch.front());
  long long n = map_.vertex_count;
  visible_degree_.resize(map_.vertex_count);
  for (VertexId v = 0; v < map_.vertex_count; ++v)
    for (const auto& nb : index_.neighbors(v))
      if (!visible(nb.link).empty()) ++visible_degree_[v];
  switch (spec_.constraint) {
    case Constraint::Path: turn_bound_ = static_cast<int>(n); break;
    case Constraint::Trail: turn_bound_ = static_cast<int>(map_.edges.size() + map_.arcs.size()); break;
    case Constraint::Walk: turn_bound_ = static_cast<int>(n * n); break;
  }
}

GameState Game::new_game() const {
  GameState s;
  ObservationLabel start;
  start.is_start = true;
  start.is_target = map_.target && *map_.target == map_.start;
  start.visited = true;
  start.last_visit_stamp = 1;
  s.labels.push_back(start);
  s.adjacency.resize(1);
  s.visit_order.push_back(0);
  settle(s);
  return s;
}

GameState new_game(const Game& game) { return game.new_game(); }

bool Game::legal_now(const GameState& s, LabelId to, const Link& link, ElementKind via) const {
  Cost c = via == ElementKind::Edge ? link.edge : link.out;
  if (c == Link::kNone) return false;
  if (spec_.budget) {
    if (spec_.budget_mode == BudgetMode::Sum ? s.cost_spent + c > *spec_.budget : c > *spec_.budget)
      return false;
  }
  UsedElement e = via == ElementKind::Edge ? UsedElement{std::min(s.current, to), std::max(s.current, to), via}
                                           : UsedElement{s.current, to, via};
  const auto& dest = s.labels[to];
  switch (spec_.constraint) {
    case Constraint::Path:
      if (!dest.visited) return true;
      if (to != 0 || !spec_.cyclic() || s.is_used(e)) return false;
      if (spec_.objective == Objective::VisitAllAndReturn) return s.visited_count() == spec_.map_vertex_count;
      return s.visited_count() >= spec_.min_visits;
    case Constraint::Trail:
      return !s.is_used(e);
    case Constraint::Walk:
      return !dest.visited || dest.last_visit_stamp < s.discovery_count;
  }
  return false;
}

std::vector<Move> Game::searcher_moves(const GameState& s) const {
  std::vector<Move> out;
  if (s.turn != Turn::SearcherToMove) return out;
  for (const auto& k : s.adjacency[s.current]) {
    if (k.link.edge != Link::kNone && legal_now(s, k.label, k.link, ElementKind::Edge))
      out.push_back({k.label, ElementKind::Edge});
    if (k.link.out != Link::kNone && legal_now(s, k.label, k.link, ElementKind::Arc))
      out.push_back({k.label, ElementKind::Arc});
  }
  return out;
}

bool Game::objective_met(const GameState& s) const {
  const auto& cur = s.labels[s.current];
  switch (spec_.objective) {
    case Objective::ReachTarget:
      return cur.is_target;
    case Objective::VisitAll:
      return s.visited_count() == spec_.map_vertex_count && cur.is_target;
    case Objective::VisitAllAndReturn:
      return s.visited_count() == spec_.map_vertex_count && s.current == 0 && s.moves >= 1;
    case Objective::VisitAtLeast:
      if (s.visited_count() < spec_.min_visits) return false;
      return !spec_.closed_tour || (s.current == 0 && s.moves >= 1);
    case Objective::TraverseRequired:
      if (s.used.size() < map_.required.size()) return false;
      return knowledge::required_covered(s, *this);
  }
  return false;
}

Outcome Game::status(const GameState& s) const {
  if (objective_met(s)) return Outcome::SearcherWin;
  if (s.moves > turn_bound_) return Outcome::SearcherLoss;
  if (spec_.budget && spec_.budget_mode == BudgetMode::Sum && s.cost_spent > *spec_.budget)
    return Outcome::SearcherLoss;
  if (s.turn == Turn::SearcherToMove && searcher_moves(s).empty()) return Outcome::SearcherLoss;
  if (s.turn == Turn::Terminal) return s.outcome;
  return Outcome::Ongoing;
}

void Game::settle(GameState& s) const {
  Outcome o = status(s);
  if (o != Outcome::Ongoing) {
    s.turn = Turn::Terminal;
    s.outcome = o;
  }
}

GameState Game::advance(const GameState& s, const Move& m) const {
  GameState n = s;
  Link link = s.known(s.current, m.to);
  Cost c = m.via == ElementKind::Edge ? link.edge : link.out;
  n.cost_spent = spec_.budget_mode == BudgetMode::Sum ? s.cost_spent + c : std::max(s.cost_spent, c);
  UsedElement e = m.via == ElementKind::Edge
                      ? UsedElement{std::min(s.current, m.to), std::max(s.current, m.to), m.via}
                      : UsedElement{s.current, m.to, m.via};
  auto it = std::lower_bound(n.used.begin(), n.used.end(), e);
  if (it == n.used.end() || *it != e) n.used.insert(it, e);
  ++n.moves;
  auto& dest = n.labels[m.to];
  if (!dest.visited) {
    dest.visited = true;
    ++n.discovery_count;
  }
  dest.last_visit_stamp = n.discovery_count;
  n.visit_order.push_back(m.to);
  n.current = m.to;
  n.turn = dest.closed ? Turn::SearcherToMove : Turn::AdversaryToReveal;
  settle(n);
  return n;
}

GameState Game::apply_move(const GameState& s, const Move& m) const {
  if (s.turn != Turn::SearcherToMove) throw GameError("not the searcher's turn");
  auto moves = searcher_moves(s);
  if (std::find(moves.begin(), moves.end(), m) == moves.end())
    throw GameError("illegal move to label " + std::to_string(m.to));
  return advance(s, m);
}

GameState Game::advance(const GameState& s, const Reveal& r) const {
  GameState n = s;
  LabelId cur = s.current;
  int serial = s.reveal_serial + 1;
  auto add_link = [&](LabelId a, LabelId b, const Link& l) {
    auto& list = n.adjacency[a];
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const KnownLink& k, LabelId v) { return k.label < v; });
    if (it != list.end() && it->label == b) it->link = it->link.merged(l);
    else list.insert(it, {b, l});
  };
  for (const auto& k : r.known) {
    add_link(cur, k.label, k.link);
    add_link(k.label, cur, k.link.reversed());
  }
  for (const auto& g : r.fresh) {
    for (int i = 0; i < g.count; ++i) {
      LabelId id = n.label_count();
      ObservationLabel l;
      l.is_target = g.is_target;
      l.first_reveal_index = serial;
      n.labels.push_back(l);
      n.adjacency.emplace_back();
      add_link(cur, id, g.link);
      add_link(id, cur, g.link.reversed());
    }
  }
  n.labels[cur].closed = true;
  n.labels[cur].closed_at = serial;
  n.reveal_serial = serial;
  n.revealed_count += r.fresh_units();
  n.turn = Turn::SearcherToMove;
  settle(n);
  return n;
}

GameState Game::apply_reveal(const GameState& s, const Reveal& r) const {
  if (s.turn != Turn::AdversaryToReveal) throw GameError("not the adversary's turn");
  bool target_known = false;
  for (const auto& l : s.labels) target_known |= l.is_target;
  int target_units = 0;
  for (const auto& g : r.fresh) {
    if (g.count < 1) throw GameError("inconsistent reveal: empty fresh group");
    if (g.link.empty()) throw GameError("inconsistent reveal: fresh group without a link");
    if (g.is_target) target_units += g.count;
  }
  if (target_units > 1 || (target_units == 1 && target_known))
    throw GameError("inconsistent reveal: target flag");
  if (s.label_count() + r.fresh_units() > map_.vertex_count)
    throw GameError("inconsistent reveal: more labels than map vertices");
  for (const auto& k : r.known) {
    if (k.label < 0 || k.label >= s.label_count() || k.label == s.current || k.link.empty())
      throw GameError("inconsistent reveal: bad known link");
  }
  // Closure of the current label makes any embeddable result a complete
  // disclosure, i.e. one of the reveals the knowledge module enumerates.
  GameState n = advance(s, r);
  if (!knowledge::embedding_exists(n, *this))
    throw GameError("inconsistent reveal: no embedding of the resulting observation");
  return n;
}

GameState Game::replay(const Transcript& t) const {
  GameState s = new_game();
  for (const auto& step : t) {
    if (const auto* m = std::get_if<Move>(&step)) s = apply_move(s, *m);
    else s = apply_reveal(s, std::get<Reveal>(step));
  }
  return s;
}

}  // namespace mapgame
