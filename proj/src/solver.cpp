#include "mapgame/solver.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <set>

namespace mapgame::solver {

std::string to_string(Value v) {
  switch (v) {
    case Value::SearcherWin: return "searcher-win";
    case Value::AdversaryWin: return "adversary-win";
    case Value::ResourceLimit: return "resource-limit";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::ResourceLimit: return "resource-limit";
  }
  return "?";
}

Solver::Solver(const Game& game, Limits limits)
    : game_(game), limits_(limits), started_(std::chrono::steady_clock::now()) {
  depth_limit_ = limits_.max_depth < 0 ? game.turn_bound() : limits_.max_depth;
}

std::string Solver::key_of(const GameState& s) const {
  std::string k = knowledge::canonical_key(s);
  if (depth_limit_ < game_.turn_bound()) k += "#" + std::to_string(s.moves);
  return k;
}

bool Solver::over_budget() {
  if (states_ > limits_.max_states) return true;
  if (limits_.max_seconds > 0 && (states_ & 255) == 0) {
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    if (elapsed > limits_.max_seconds) return true;
  }
  return false;
}

void Solver::remember(const std::string& key, Value v) {
  if (!limits_.memoize || limits_.memo_capacity == 0) return;
  auto it = memo_.find(key);
  if (it != memo_.end()) {
    it->second.value = v;
    return;
  }
  lru_.push_front(key);
  memo_.emplace(key, Entry{v, lru_.begin()});
  while (memo_.size() > limits_.memo_capacity) {
    memo_.erase(lru_.back());
    lru_.pop_back();
  }
}

namespace {

constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;

struct Offline {
  const Game& g;
  const GameState& s;
  const knowledge::CoreEmbedding& emb;
  std::vector<char> visited;
  std::vector<ElementRef> used;
  VertexId x = 0;
  Cost remaining = kInf;
  std::optional<Cost> element_cap;

  Offline(const Game& game, const GameState& state, const knowledge::CoreEmbedding& e)
      : g(game), s(state), emb(e), visited(game.map().vertex_count, 0) {
    for (LabelId l = 0; l < s.label_count(); ++l)
      if (s.labels[l].visited) visited[emb.image[l]] = 1;
    for (const auto& u : s.used) {
      VertexId a = emb.image[u.a], b = emb.image[u.b];
      if (u.kind == ElementKind::Edge && a > b) std::swap(a, b);
      used.push_back({u.kind, a, b});
    }
    std::sort(used.begin(), used.end());
    x = emb.image[s.current];
    const auto& spec = g.spec();
    if (spec.budget) {
      if (spec.budget_mode == BudgetMode::Sum) remaining = *spec.budget - s.cost_spent;
      else element_cap = *spec.budget;
    }
  }

  Constraint constraint() const { return g.spec().constraint; }
  bool exceeds(Cost c) const { return c >= kInf || c > remaining; }

  // Elements leaving y that the constraint still allows (ignoring vertex rules).
  template <typename F>
  void steps(VertexId y, F&& fn) const {
    for (const auto& nb : g.index().neighbors(y)) {
      auto try_element = [&](Cost c, ElementRef ref) {
        if (c == Link::kNone) return;
        if (element_cap && c > *element_cap) return;
        if (constraint() == Constraint::Trail && std::binary_search(used.begin(), used.end(), ref)) return;
        fn(nb.vertex, c);
      };
      try_element(nb.link.edge, {ElementKind::Edge, std::min(y, nb.vertex), std::max(y, nb.vertex)});
      try_element(nb.link.out, {ElementKind::Arc, y, nb.vertex});
    }
  }

  // Path games may only pass through unvisited vertices.
  bool enterable(VertexId v) const { return constraint() != Constraint::Path || !visited[v]; }

  std::vector<Cost> distances() const {
    std::vector<Cost> dist(g.map().vertex_count, kInf);
    using Item = std::pair<Cost, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[x] = 0;
    pq.push({0, x});
    while (!pq.empty()) {
      auto [d, y] = pq.top();
      pq.pop();
      if (d != dist[y]) continue;
      steps(y, [&](VertexId z, Cost c) {
        if (!enterable(z)) return;
        if (d + c < dist[z]) {
          dist[z] = d + c;
          pq.push({dist[z], z});
        }
      });
    }
    return dist;
  }

  // Cheapest element entering v from an allowed predecessor.
  Cost min_entry(VertexId v, bool from_unvisited_only) const {
    Cost best = kInf;
    for (const auto& nb : g.index().neighbors(v)) {
      VertexId w = nb.vertex;
      if (from_unvisited_only && visited[w] && w != x) continue;
      Link back = g.index().link(w, v);
      auto consider = [&](Cost c, ElementRef ref) {
        if (c == Link::kNone) return;
        if (element_cap && c > *element_cap) return;
        if (constraint() == Constraint::Trail && std::binary_search(used.begin(), used.end(), ref)) return;
        best = std::min(best, c);
      };
      consider(back.edge, {ElementKind::Edge, std::min(v, w), std::max(v, w)});
      consider(back.out, {ElementKind::Arc, w, v});
    }
    return best;
  }

  bool hamiltonian_shape_ok(const std::vector<VertexId>& unvisited, std::optional<VertexId> end,
                            std::optional<VertexId> closing) const {
    for (VertexId u : unvisited) {
      std::set<VertexId> pred, succ;
      bool edge_only = true;
      for (const auto& nb : g.index().neighbors(u)) {
        VertexId w = nb.vertex;
        bool pred_ok = (!visited[w] || w == x) && w != u;
        bool succ_ok = !visited[w] || (closing && w == *closing);
        Cost cap = element_cap ? *element_cap : kInf;
        bool in_ok = (nb.link.edge != Link::kNone && nb.link.edge <= cap) ||
                     (nb.link.in != Link::kNone && nb.link.in <= cap);
        bool out_ok = (nb.link.edge != Link::kNone && nb.link.edge <= cap) ||
                      (nb.link.out != Link::kNone && nb.link.out <= cap);
        if (pred_ok && in_ok) pred.insert(w);
        if (succ_ok && out_ok) succ.insert(w);
        if (nb.link.in != Link::kNone || nb.link.out != Link::kNone) edge_only = false;
      }
      if (pred.empty()) return false;
      bool is_end = end && *end == u;
      if (!is_end && succ.empty()) return false;
      if (!is_end && edge_only) {
        std::set<VertexId> both = pred;
        both.insert(succ.begin(), succ.end());
        if (both.size() < 2) return false;
      }
    }
    return true;
  }

  bool infeasible() const {
    const auto& spec = g.spec();
    const auto& map = g.map();
    const int n = map.vertex_count;
    std::vector<VertexId> unvisited;
    for (VertexId v = 0; v < n; ++v)
      if (!visited[v]) unvisited.push_back(v);
    auto dist = distances();
    auto all_reached = [&] {
      for (VertexId u : unvisited)
        if (dist[u] >= kInf) return false;
      return true;
    };
    bool path = constraint() == Constraint::Path;
    switch (spec.objective) {
      case Objective::ReachTarget: {
        VertexId t = *map.target;
        if (t == x) return false;
        return exceeds(dist[t]);
      }
      case Objective::VisitAll: {
        VertexId t = *map.target;
        if (unvisited.empty()) return x != t;
        if (path && visited[t]) return true;
        if (!all_reached()) return true;
        Cost need = 0;
        for (VertexId u : unvisited) need += std::min(min_entry(u, path), kInf);
        if (exceeds(need)) return true;
        if (path && !hamiltonian_shape_ok(unvisited, t, std::nullopt)) return true;
        return false;
      }
      case Objective::VisitAllAndReturn: {
        VertexId s0 = map.start;
        if (unvisited.empty()) {
          if (x == s0 && s.moves >= 1) return false;
          if (path) {
            Link l = g.index().link(x, s0);
            bool edge_free = l.edge != Link::kNone &&
                             !std::binary_search(used.begin(), used.end(),
                                                 ElementRef{ElementKind::Edge, std::min(x, s0), std::max(x, s0)});
            Cost c = kInf;
            if (edge_free) c = l.edge;
            if (l.out != Link::kNone) c = std::min(c, l.out);
            if (element_cap && c > *element_cap) c = kInf;
            return exceeds(c);
          }
          // Walk and trail games may route back through visited vertices.
          std::vector<Cost> back = distances_with_start();
          return exceeds(back[s0]);
        }
        if (!all_reached()) return true;
        Cost need = 0;
        for (VertexId u : unvisited) need += std::min(min_entry(u, path), kInf);
        if (exceeds(need)) return true;
        if (path && !hamiltonian_shape_ok(unvisited, std::nullopt, s0)) return true;
        return false;
      }
      case Objective::VisitAtLeast: {
        int reach = 0;
        for (VertexId u : unvisited)
          if (dist[u] < kInf) ++reach;
        return s.visited_count() + reach < spec.min_visits;
      }
      case Objective::TraverseRequired:
        return false;
    }
    return false;
  }

  // Distances where the start may be re-entered (used for the closing leg).
  std::vector<Cost> distances_with_start() const { return distances(); }
};

}  // namespace

bool Solver::offline_infeasible(const GameState& s) const {
  bool found = false;
  knowledge::for_each_embedding(s, game_, [&](const knowledge::CoreEmbedding& emb) {
    Offline o(game_, s, emb);
    if (o.infeasible()) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

std::vector<Move> Solver::distinct_moves(const GameState& s) const {
  auto moves = game_.searcher_moves(s);
  auto cls = knowledge::interchangeable_classes(s);
  std::set<std::pair<int, int>> seen;
  std::vector<Move> out;
  for (const auto& m : moves) {
    int id = cls[m.to] >= 0 ? cls[m.to] : -1 - m.to;
    if (seen.insert({id, static_cast<int>(m.via)}).second) out.push_back(m);
  }
  // Known target first, then unvisited labels.
  std::stable_sort(out.begin(), out.end(), [&](const Move& a, const Move& b) {
    auto rank = [&](const Move& m) {
      const auto& l = s.labels[m.to];
      return l.is_target ? 0 : (!l.visited ? 1 : 2);
    };
    return rank(a) < rank(b);
  });
  return out;
}

std::vector<Reveal> Solver::ordered_reveals(const GameState& s) const {
  auto reveals = knowledge::enumerate_reveals(s, game_, knowledge::Symmetry::Interchangeable);
  std::stable_sort(reveals.begin(), reveals.end(),
                   [](const Reveal& a, const Reveal& b) { return a.fresh_units() < b.fresh_units(); });
  return reveals;
}

Value Solver::search(const GameState& s) {
  if (exhausted_) return Value::ResourceLimit;
  ++states_;
  if (over_budget()) {
    exhausted_ = true;
    return Value::ResourceLimit;
  }
  if (s.turn == Turn::Terminal)
    return s.outcome == Outcome::SearcherWin ? Value::SearcherWin : Value::AdversaryWin;
  if (s.turn == Turn::SearcherToMove && s.moves >= depth_limit_) return Value::AdversaryWin;
  std::string key;
  if (limits_.memoize) {
    key = key_of(s);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.pos);
      return it->second.value;
    }
  }
  Value result;
  if (limits_.prune && offline_infeasible(s)) {
    result = Value::AdversaryWin;
  } else if (s.turn == Turn::SearcherToMove) {
    result = Value::AdversaryWin;
    for (const auto& m : distinct_moves(s)) {
      Value v = search(game_.advance(s, m));
      if (v == Value::ResourceLimit) return v;
      if (v == Value::SearcherWin) {
        result = v;
        break;
      }
    }
  } else {
    result = Value::SearcherWin;
    for (const auto& r : ordered_reveals(s)) {
      Value v = search(game_.advance(s, r));
      if (v == Value::ResourceLimit) return v;
      if (v == Value::AdversaryWin) {
        result = v;
        break;
      }
    }
  }
  if (limits_.memoize) remember(key, result);
  return result;
}

Value Solver::value(const GameState& s) { return search(s); }

std::optional<Move> Solver::winning_move(const GameState& s) {
  if (s.turn != Turn::SearcherToMove) return std::nullopt;
  auto moves = game_.searcher_moves(s);
  for (const auto& m : moves)
    if (search(game_.advance(s, m)) == Value::SearcherWin) return m;
  return std::nullopt;
}

std::optional<Reveal> Solver::refuting_reveal(const GameState& s) {
  if (s.turn != Turn::AdversaryToReveal) return std::nullopt;
  for (const auto& r : ordered_reveals(s))
    if (search(game_.advance(s, r)) == Value::AdversaryWin) return r;
  // Quotiented reveals cover every orbit; fall back to the full set for safety.
  for (const auto& r : knowledge::enumerate_reveals(s, game_))
    if (search(game_.advance(s, r)) == Value::AdversaryWin) return r;
  return std::nullopt;
}

Transcript Solver::principal(const GameState& from) {
  Transcript t;
  GameState s = from;
  Value root = search(s);
  if (root == Value::ResourceLimit) return t;
  while (s.turn != Turn::Terminal) {
    if (exhausted_) break;
    if (s.turn == Turn::SearcherToMove) {
      std::optional<Move> m;
      if (root == Value::SearcherWin) m = winning_move(s);
      if (!m) {
        auto moves = game_.searcher_moves(s);
        if (moves.empty()) break;
        m = moves.front();
      }
      t.push_back(*m);
      s = game_.advance(s, *m);
    } else {
      std::optional<Reveal> r;
      if (root == Value::AdversaryWin) r = refuting_reveal(s);
      if (!r) r = ordered_reveals(s).front();
      t.push_back(*r);
      s = game_.advance(s, *r);
    }
  }
  return t;
}

SolveResult solve(const Game& game, const Limits& limits) {
  auto started = std::chrono::steady_clock::now();
  auto solver = std::make_shared<Solver>(game, limits);
  SolveResult r;
  GameState root = game.new_game();
  r.value = solver->value(root);
  if (r.value != Value::ResourceLimit) {
    r.principal = solver->principal(root);
    if (solver->exhausted()) r.principal.reset();
  }
  r.states = solver->states();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  r.solver = solver;
  return r;
}

namespace {

class ExtractedStrategy : public SearcherStrategy {
 public:
  explicit ExtractedStrategy(std::shared_ptr<Solver> s) : solver_(std::move(s)) {}
  std::string name() const override { return "optimal"; }
  Move choose(const Game& g, const GameState& s) override {
    if (auto m = solver_->winning_move(s)) return *m;
    auto moves = g.searcher_moves(s);
    if (moves.empty()) throw GameError("optimal strategy: no legal move");
    return moves.front();
  }
  std::unique_ptr<SearcherStrategy> clone() const override { return std::make_unique<ExtractedStrategy>(solver_); }

 private:
  std::shared_ptr<Solver> solver_;
};

class ExtractedPolicy : public AdversaryPolicy {
 public:
  explicit ExtractedPolicy(std::shared_ptr<Solver> s) : solver_(std::move(s)) {}
  std::string name() const override { return "optimal"; }
  Reveal choose(const Game& g, const GameState& s) override {
    if (auto r = solver_->refuting_reveal(s)) return *r;
    auto reveals = knowledge::enumerate_reveals(s, g);
    if (reveals.empty()) throw GameError("optimal policy: no consistent reveal");
    return reveals.front();
  }

 private:
  std::shared_ptr<Solver> solver_;
};

void require_definite(const SolveResult& r) {
  if (!r.solver) throw GameError("extract_policy: no solver state retained");
  if (r.value == Value::ResourceLimit) throw GameError("extract_policy: solve hit its resource limit");
}

}  // namespace

std::unique_ptr<SearcherStrategy> extract_searcher_strategy(const SolveResult& r) {
  require_definite(r);
  return std::make_unique<ExtractedStrategy>(r.solver);
}

std::unique_ptr<AdversaryPolicy> extract_adversary_policy(const SolveResult& r) {
  require_definite(r);
  return std::make_unique<ExtractedPolicy>(r.solver);
}

namespace {

class Budget {
 public:
  explicit Budget(const VerifyOptions& o) : o_(o), started_(std::chrono::steady_clock::now()) {}
  bool tick() {
    ++states_;
    if (states_ > o_.max_states) return false;
    if (o_.max_seconds > 0 && (states_ & 255) == 0 && elapsed() > o_.max_seconds) return false;
    return true;
  }
  long long states() const { return states_; }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  }

 private:
  const VerifyOptions& o_;
  std::chrono::steady_clock::time_point started_;
  long long states_ = 0;
};

struct SearcherCheck {
  const Game& g;
  const VerifyOptions& o;
  Budget budget;
  Transcript path;
  std::optional<Transcript> counter;
  std::string message;

  // Returns Holds/Fails/ResourceLimit for the subtree.
  Verdict run(const GameState& s, SearcherStrategy& strat) {
    if (!budget.tick()) return Verdict::ResourceLimit;
    if (s.turn == Turn::Terminal) {
      if (s.outcome == Outcome::SearcherWin) return Verdict::Holds;
      counter = path;
      message = "searcher loses";
      return Verdict::Fails;
    }
    if (s.turn == Turn::SearcherToMove) {
      Move m;
      try {
        m = strat.choose(g, s);
      } catch (const std::exception& e) {
        counter = path;
        message = std::string("strategy error: ") + e.what();
        return Verdict::Fails;
      }
      auto legal = g.searcher_moves(s);
      if (std::find(legal.begin(), legal.end(), m) == legal.end()) {
        path.push_back(m);
        counter = path;
        message = "strategy returned an illegal move";
        return Verdict::Fails;
      }
      path.push_back(m);
      Verdict v = run(g.advance(s, m), strat);
      path.pop_back();
      return v;
    }
    auto reveals = knowledge::enumerate_reveals(
        s, g, o.quotient ? knowledge::Symmetry::Interchangeable : knowledge::Symmetry::FreshOnly);
    std::stable_sort(reveals.begin(), reveals.end(),
                     [](const Reveal& a, const Reveal& b) { return a.fresh_units() < b.fresh_units(); });
    for (std::size_t i = 0; i < reveals.size(); ++i) {
      auto branch = i + 1 == reveals.size() ? nullptr : strat.clone();
      SearcherStrategy& use = branch ? *branch : strat;
      path.push_back(reveals[i]);
      Verdict v = run(g.advance(s, reveals[i]), use);
      path.pop_back();
      if (v != Verdict::Holds) return v;
    }
    return Verdict::Holds;
  }
};

struct AdversaryCheck {
  const Game& g;
  AdversaryPolicy& policy;
  const VerifyOptions& o;
  Budget budget;
  Transcript path;
  std::optional<Transcript> counter;
  std::string message;

  Verdict run(const GameState& s) {
    if (!budget.tick()) return Verdict::ResourceLimit;
    if (s.turn == Turn::Terminal) {
      if (s.outcome == Outcome::SearcherLoss) return Verdict::Holds;
      counter = path;
      message = "searcher wins";
      return Verdict::Fails;
    }
    if (s.turn == Turn::AdversaryToReveal) {
      Reveal r = policy.choose(g, s);
      GameState next;
      try {
        next = g.apply_reveal(s, r);
      } catch (const GameError& e) {
        throw GameError(std::string("adversary policy produced an illegal reveal: ") + e.what());
      }
      path.push_back(r);
      Verdict v = run(next);
      path.pop_back();
      return v;
    }
    auto moves = g.searcher_moves(s);
    for (const auto& m : moves) {
      path.push_back(m);
      Verdict v = run(g.advance(s, m));
      path.pop_back();
      if (v != Verdict::Holds) return v;
    }
    return Verdict::Holds;
  }
};

}  // namespace

VerifyResult verify_searcher_strategy(const Game& game, const SearcherStrategy& strategy,
                                      const VerifyOptions& options) {
  SearcherCheck check{game, options, Budget(options), {}, {}, {}};
  auto strat = strategy.clone();
  VerifyResult r;
  r.verdict = check.run(game.new_game(), *strat);
  r.states = check.budget.states();
  r.seconds = check.budget.elapsed();
  r.counter = check.counter;
  r.message = check.message;
  return r;
}

VerifyResult verify_adversary_policy(const Game& game, AdversaryPolicy& policy, const VerifyOptions& options) {
  AdversaryCheck check{game, policy, options, Budget(options), {}, {}, {}};
  VerifyResult r;
  r.verdict = check.run(game.new_game());
  r.states = check.budget.states();
  r.seconds = check.budget.elapsed();
  r.counter = check.counter;
  r.message = check.message;
  return r;
}

}  // namespace mapgame::solver
