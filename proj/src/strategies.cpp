#include "mapgame/strategies.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "mapgame/knowledge.hpp"

namespace mapgame::strategies {

namespace {

// ---------------------------------------------------------------------------
// Baselines

class FirstMove : public SearcherStrategy {
 public:
  std::string name() const override { return "first"; }
  Move choose(const Game& g, const GameState& s) override {
    auto moves = g.searcher_moves(s);
    if (moves.empty()) throw StrategyError("no legal move");
    return moves.front();
  }
  std::unique_ptr<SearcherStrategy> clone() const override { return std::make_unique<FirstMove>(); }
};

class DfsWalk : public SearcherStrategy {
 public:
  std::string name() const override { return "dfs"; }

  Move choose(const Game& g, const GameState& s) override {
    auto moves = g.searcher_moves(s);
    if (moves.empty()) throw StrategyError("no legal move");
    auto legal_to = [&](LabelId l) -> std::optional<Move> {
      for (const auto& m : moves)
        if (m.to == l) return m;
      return std::nullopt;
    };
    for (const auto& m : moves)
      if (s.labels[m.to].is_target) return m;
    for (const auto& m : moves)
      if (!s.labels[m.to].visited) return m;
    // Backtrack to the parent on the depth-first stack.
    std::vector<LabelId> stack;
    for (LabelId l : s.visit_order) {
      auto it = std::find(stack.begin(), stack.end(), l);
      if (it != stack.end()) stack.erase(it + 1, stack.end());
      else stack.push_back(l);
    }
    if (stack.size() >= 2)
      if (auto m = legal_to(stack[stack.size() - 2])) return *m;
    // Otherwise head for the nearest label with an unvisited neighbor.
    std::vector<int> first_step(s.label_count(), -1);
    std::deque<LabelId> queue;
    for (std::size_t i = 0; i < moves.size(); ++i) {
      LabelId l = moves[i].to;
      if (first_step[l] != -1) continue;
      first_step[l] = static_cast<int>(i);
      queue.push_back(l);
    }
    while (!queue.empty()) {
      LabelId a = queue.front();
      queue.pop_front();
      for (const auto& k : s.adjacency[a]) {
        bool forward = k.link.edge != Link::kNone || k.link.out != Link::kNone;
        if (!forward) continue;
        if (!s.labels[k.label].visited) return moves[first_step[a]];
        if (first_step[k.label] != -1 || k.label == s.current) continue;
        first_step[k.label] = first_step[a];
        queue.push_back(k.label);
      }
    }
    return moves.front();
  }

  std::unique_ptr<SearcherStrategy> clone() const override { return std::make_unique<DfsWalk>(); }
};

// ---------------------------------------------------------------------------
// Proof walkthroughs

struct Role {
  int var = 0;         // x<var>.*, or clause index for c<k>.*
  char group = '?';    // 'x' variable gadget, 'c' clause gadget, 's', 't', '?'
  std::string part;    // name after the gadget prefix, e.g. "u5", "v2", "l1.a"
  char letter = 0;     // first character of part
  int index = -1;      // trailing number of part when it is letter+digits
  bool sink = false;
};

Role parse_role(const std::string& name) {
  Role r;
  r.sink = name.size() >= 5 && name.compare(name.size() - 5, 5, ".sink") == 0;
  if (name == "s" || name == "t") {
    r.group = name[0];
    r.part = name;
    return r;
  }
  auto dot = name.find('.');
  if ((name[0] == 'x' || name[0] == 'c') && dot != std::string::npos) {
    try {
      r.var = std::stoi(name.substr(1, dot - 1));
    } catch (const std::exception&) {
      return r;
    }
    r.group = name[0];
    r.part = name.substr(dot + 1);
  } else if (name[0] == 'c') {
    // Hamiltonian clause vertices are plain "c<k>".
    try {
      r.var = std::stoi(name.substr(1));
      r.group = 'k';
      r.part = name;
    } catch (const std::exception&) {
    }
    return r;
  } else {
    return r;
  }
  if (!r.part.empty()) {
    r.letter = r.part[0];
    std::string digits = r.part.substr(1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) r.index = std::stoi(digits);
  }
  return r;
}

struct RoleTable {
  std::vector<Role> roles;
  std::map<std::string, VertexId> by_name;

  explicit RoleTable(const MixedGraph& g) : roles(g.vertex_count) {
    for (const auto& [v, name] : g.annotations) {
      roles[v] = parse_role(name);
      by_name[name] = v;
    }
  }
  std::optional<VertexId> find(const std::string& name) const {
    auto it = by_name.find(name);
    if (it == by_name.end()) return std::nullopt;
    return it->second;
  }
  VertexId at(const std::string& name) const {
    auto v = find(name);
    if (!v) throw StrategyError("map lacks role " + name);
    return *v;
  }
};

std::string xname(int var, const std::string& part) { return "x" + std::to_string(var) + "." + part; }

class ProofStrategy : public SearcherStrategy {
 public:
  explicit ProofStrategy(qbf::SkolemPolicy p) : policy_(std::move(p)) {}

  Move choose(const Game& g, const GameState& s) override {
    auto moves = g.searcher_moves(s);
    if (moves.empty()) throw StrategyError("no legal move");
    if (!roles_ || roles_map_ != &g.map()) {
      roles_ = std::make_shared<RoleTable>(g.map());
      roles_map_ = &g.map();
    }
    std::vector<int> score(moves.size(), 0);
    knowledge::for_each_embedding(s, g, [&](const knowledge::CoreEmbedding& emb) {
      auto images = knowledge::label_images(s, g, emb);
      std::set<VertexId> ok = acceptable(g, s, emb);
      for (std::size_t i = 0; i < moves.size(); ++i) {
        const auto& cand = images[moves[i].to];
        if (!cand.empty() && std::all_of(cand.begin(), cand.end(), [&](VertexId v) { return ok.count(v) != 0; }))
          ++score[i];
      }
      return true;
    });
    // A move safe under every consistent embedding, else the most plausible one.
    std::size_t best = 0;
    for (std::size_t i = 1; i < moves.size(); ++i)
      if (score[i] > score[best]) best = i;
    return moves[best];
  }

 protected:
  // Map vertices the walkthrough allows next when the searcher stands at the
  // image of the current label under emb.
  virtual std::set<VertexId> acceptable(const Game& g, const GameState& s, const knowledge::CoreEmbedding& emb) = 0;

  const RoleTable& roles() const { return *roles_; }
  bool visited(const knowledge::CoreEmbedding& emb, VertexId v) const { return emb.owner[v] != -1; }

  // The chain successor of a connector vertex: its neighbor outside its own gadget.
  std::set<VertexId> leave_gadget(const Game& g, const knowledge::CoreEmbedding& emb, VertexId x,
                                  const std::vector<std::string>& entries) const {
    std::set<VertexId> out;
    const Role& rx = roles().roles[x];
    for (const auto& nb : g.index().neighbors(x)) {
      if (visited(emb, nb.vertex)) continue;
      const Role& r = roles().roles[nb.vertex];
      if (r.sink) continue;
      bool other_gadget = r.group != rx.group || r.var != rx.var;
      if (!other_gadget) continue;
      if (r.group == 't' || std::find(entries.begin(), entries.end(), r.part) != entries.end()) out.insert(nb.vertex);
    }
    return out;
  }

  // Existential choice for var given the universal values read off emb, or
  // nullopt when the policy does not cover it.
  std::optional<bool> skolem(int var, const std::map<int, bool>& universal) const {
    if (!policy_.defines(var)) return std::nullopt;
    try {
      return policy_.choose(var, universal);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  qbf::SkolemPolicy policy_;
  std::shared_ptr<RoleTable> roles_;
  const MixedGraph* roles_map_ = nullptr;
};

class StPathProof : public ProofStrategy {
 public:
  using ProofStrategy::ProofStrategy;
  std::string name() const override { return "stpath-proof"; }
  std::unique_ptr<SearcherStrategy> clone() const override { return std::make_unique<StPathProof>(*this); }

 protected:
  // Truth of var under emb: which branch vertex was visited, if any.
  std::optional<bool> truth(const knowledge::CoreEmbedding& emb, int var) const {
    if (auto v = roles().find(xname(var, "v")); v && visited(emb, *v)) return true;
    if (auto w = roles().find(xname(var, "w")); w && visited(emb, *w)) return false;
    return std::nullopt;
  }

  std::set<VertexId> acceptable(const Game& g, const GameState& s, const knowledge::CoreEmbedding& emb) override {
    VertexId x = emb.image[s.current];
    const Role& r = roles().roles[x];
    auto X = [&](const std::string& part) { return roles().at(xname(r.var, part)); };
    auto unvisited = [&](VertexId v) { return !visited(emb, v); };
    if (r.group == 's') return leave_gadget(g, emb, x, {"u1"});
    if (r.group == 'x') {
      const std::string& p = r.part;
      if (p == "u1") return {X("u2"), X("u3")};
      if (p == "u2") return {unvisited(X("u3")) ? X("u3") : X("u4")};
      if (p == "u3") return {unvisited(X("u2")) ? X("u2") : X("u4")};
      if (p == "u4") return {X("p1")};
      if (r.letter == 'p' && roles().find(xname(r.var, "q1"))) return {X("q" + std::to_string(r.index))};
      if (r.letter == 'p' || r.letter == 'q') {
        if (r.index == 4) return {X("u5")};
        return {X("p" + std::to_string(r.index + 1))};
      }
      if (p == "u5") {
        // The branch vertex v encodes true.
        const auto& prefix_roles = universal_order(g);
        auto q = quantifier_.find(r.var);
        if (q == quantifier_.end() || q->second == qbf::Quantifier::Forall) return {X("v"), X("w")};
        std::map<int, bool> universal;
        for (int u : prefix_roles) {
          if (u == r.var) break;
          if (quantifier_[u] != qbf::Quantifier::Forall) continue;
          auto t = truth(emb, u);
          if (!t) return {};
          universal[u] = *t;
        }
        auto choice = skolem(r.var, universal);
        if (!choice) return {X("v"), X("w")};
        return {*choice ? X("v") : X("w")};
      }
      if (p == "v") return {X("v1")};
      if (p == "w") return {X("w1")};
      if ((r.letter == 'v' || r.letter == 'w') && r.index >= 1 && r.index <= 4)
        return {X(std::string(1, r.letter) + std::to_string(r.index + 1))};
      if (p == "v5" || p == "w5") return {X("u6")};
      if (p == "u6") return {X("u7")};
      if (p == "u7") return leave_gadget(g, emb, x, {"u1", "c1"});
      return {};
    }
    if (r.group == 'c') {
      const std::string cp = "c" + std::to_string(r.var) + ".";
      if (r.part == "c1") {
        std::set<VertexId> out;
        for (int l = 1;; ++l) {
          auto a = roles().find(cp + "l" + std::to_string(l) + ".a");
          if (!a) break;
          for (const auto& nb : g.index().neighbors(*a)) {
            const Role& lr = roles().roles[nb.vertex];
            if (lr.group != 'x' || (lr.part != "v2" && lr.part != "w4")) continue;
            auto t = truth(emb, lr.var);
            if (t && *t == (lr.part == "v2")) out.insert(*a);
          }
        }
        return out;
      }
      if (r.part.size() > 2 && r.part.compare(r.part.size() - 2, 2, ".a") == 0)
        return {roles().at(cp + r.part.substr(0, r.part.size() - 2) + ".b")};
      if (r.part.size() > 2 && r.part.compare(r.part.size() - 2, 2, ".b") == 0) return {roles().at(cp + "c2")};
      if (r.part == "c2") return leave_gadget(g, emb, x, {"c1"});
    }
    return {};
  }

 private:
  // Variables in gadget order, read off the chain from s.
  const std::vector<int>& universal_order(const Game& g) {
    if (!order_.empty()) return order_;
    const auto& map = g.map();
    const auto& idx = g.index();
    VertexId at = map.start;
    std::set<int> seen;
    for (;;) {
      std::optional<VertexId> next;
      for (const auto& nb : idx.neighbors(at)) {
        const Role& r = roles().roles[nb.vertex];
        if (r.group == 'x' && r.part == "u1" && !seen.count(r.var)) next = nb.vertex;
      }
      if (!next) break;
      int var = roles().roles[*next].var;
      seen.insert(var);
      order_.push_back(var);
      // Gadgets carrying the green edge are existential.
      auto q2 = roles().find(xname(var, "q2"));
      VertexId p2 = q2 ? *q2 : roles().at(xname(var, "p2")), v = roles().at(xname(var, "v"));
      quantifier_[var] = idx.link(p2, v).empty() ? qbf::Quantifier::Forall : qbf::Quantifier::Exists;
      at = roles().at(xname(var, "u7"));
    }
    return order_;
  }

  std::vector<int> order_;
  std::map<int, qbf::Quantifier> quantifier_;
};

class HamProof : public ProofStrategy {
 public:
  using ProofStrategy::ProofStrategy;
  std::string name() const override { return "ham-proof"; }
  std::unique_ptr<SearcherStrategy> clone() const override { return std::make_unique<HamProof>(*this); }

 protected:
  int chain_length(int var) const {
    int len = 0;
    while (roles().find(xname(var, "m" + std::to_string(len + 1)))) ++len;
    return len;
  }

  // Truth of var under emb: the side entered right after u8.
  std::optional<bool> truth(const GameState& s, const knowledge::CoreEmbedding& emb, int var) const {
    VertexId u8 = roles().at(xname(var, "u8"));
    LabelId l = emb.owner[u8];
    if (l == -1) return std::nullopt;
    auto it = std::find(s.visit_order.begin(), s.visit_order.end(), l);
    if (it == s.visit_order.end() || it + 1 == s.visit_order.end()) return std::nullopt;
    VertexId next = emb.image[*(it + 1)];
    if (next == roles().at(xname(var, "v1"))) return true;
    if (next == roles().at(xname(var, "w1"))) return false;
    return std::nullopt;
  }

  std::set<VertexId> acceptable(const Game& g, const GameState& s, const knowledge::CoreEmbedding& emb) override {
    VertexId x = emb.image[s.current];
    const Role& r = roles().roles[x];
    auto X = [&](const std::string& part) { return roles().at(xname(r.var, part)); };
    auto unvisited = [&](VertexId v) { return !visited(emb, v); };
    if (r.group == 's') return leave_gadget(g, emb, x, {"u1"});
    if (r.group == 'k') {
      // Return to the gadget the detour started from.
      if (s.visit_order.size() < 2) return {};
      VertexId from = emb.image[s.visit_order[s.visit_order.size() - 2]];
      const Role& fr = roles().roles[from];
      if (fr.group != 'x' || (fr.letter != 'v' && fr.letter != 'w')) return {};
      return {roles().at(xname(fr.var, std::string(1, fr.letter == 'v' ? 'w' : 'v') + std::to_string(fr.index + 1)))};
    }
    if (r.group != 'x') return {};
    const int len = chain_length(r.var);
    if (r.letter == 'u') {
      switch (r.index) {
        case 1: return {X("u2"), X("u3")};
        case 2: return {unvisited(X("u3")) ? X("u3") : X("u4")};
        case 3: return {unvisited(X("u2")) ? X("u2") : X("u4")};
        case 4: return {X("u5")};
        case 5: return {X("u6")};
        case 6: return {X("u7")};
        case 7: return {X("u8")};
        case 8: {
          VertexId u3 = X("u3"), v1 = X("v1"), w1 = X("w1");
          bool existential = !g.index().link(u3, v1).empty();
          if (!existential) return {v1, w1};
          std::map<int, bool> universal;
          for (int u : prior_universals(g, r.var)) {
            auto t = truth(s, emb, u);
            if (!t) return {};
            universal[u] = *t;
          }
          auto choice = skolem(r.var, universal);
          if (!choice) return {v1, w1};
          return {*choice ? v1 : w1};
        }
        case 9: return {X("u0")};
        case 0: return leave_gadget(g, emb, x, {"u1"});
        default: return {};
      }
    }
    if (r.letter == 'm') {
      std::set<VertexId> out;
      for (char c : {'v', 'w'})
        if (unvisited(X(std::string(1, c) + std::to_string(r.index)))) out.insert(X(std::string(1, c) + std::to_string(r.index)));
      return out;
    }
    if (r.letter == 'v' || r.letter == 'w') {
      VertexId m = X("m" + std::to_string(r.index));
      if (unvisited(m)) return {m};
      if (r.index == len) return {X("u9")};
      if (r.index % 4 == 2) {
        for (const auto& nb : g.index().neighbors(x)) {
          const Role& cr = roles().roles[nb.vertex];
          if (cr.group == 'k' && unvisited(nb.vertex)) return {nb.vertex};
        }
      }
      return {X(std::string(1, r.letter == 'v' ? 'w' : 'v') + std::to_string(r.index + 1))};
    }
    return {};
  }

 private:
  // Universal variables whose gadgets precede var on the chain.
  std::vector<int> prior_universals(const Game& g, int var) {
    if (chain_.empty()) {
      const auto& idx = g.index();
      VertexId at = g.map().start;
      std::set<int> seen;
      for (;;) {
        std::optional<VertexId> next;
        for (const auto& nb : idx.neighbors(at)) {
          const Role& r = roles().roles[nb.vertex];
          if (r.group == 'x' && r.part == "u1" && !seen.count(r.var)) next = nb.vertex;
        }
        if (!next) break;
        int v = roles().roles[*next].var;
        seen.insert(v);
        bool existential = !idx.link(roles().at(xname(v, "u3")), roles().at(xname(v, "v1"))).empty();
        chain_.push_back({v, existential});
        at = roles().at(xname(v, "u0"));
      }
    }
    std::vector<int> out;
    for (const auto& [v, existential] : chain_) {
      if (v == var) break;
      if (!existential) out.push_back(v);
    }
    return out;
  }

  std::vector<std::pair<int, bool>> chain_;
};

// ---------------------------------------------------------------------------
// Adversary policies

class SinkSeeking : public AdversaryPolicy {
 public:
  std::string name() const override { return "sink-seeking"; }
  Reveal choose(const Game& g, const GameState& s) override {
    auto options = knowledge::enumerate_reveal_options(s, g, knowledge::Symmetry::Interchangeable);
    if (options.empty()) throw StrategyError("no consistent reveal");
    const auto& target = g.map().target;
    const knowledge::RevealOption* best = nullptr;
    for (const auto& o : options) {
      bool trap = std::any_of(o.current_images.begin(), o.current_images.end(), [&](VertexId v) {
        return g.index().degree(v) == 1 && !(target && *target == v);
      });
      if (!trap) continue;
      if (!best || o.reveal.fresh_units() < best->reveal.fresh_units()) best = &o;
    }
    return best ? best->reveal : options.front().reveal;
  }
};

class FirstConsistent : public AdversaryPolicy {
 public:
  std::string name() const override { return "first"; }
  Reveal choose(const Game& g, const GameState& s) override {
    auto reveals = knowledge::enumerate_reveals(s, g);
    if (reveals.empty()) throw StrategyError("no consistent reveal");
    return reveals.front();
  }
};

}  // namespace

std::unique_ptr<SearcherStrategy> dfs_walk_strategy() { return std::make_unique<DfsWalk>(); }
std::unique_ptr<SearcherStrategy> first_move_strategy() { return std::make_unique<FirstMove>(); }
std::unique_ptr<SearcherStrategy> stpath_proof_strategy(qbf::SkolemPolicy policy) {
  return std::make_unique<StPathProof>(std::move(policy));
}
std::unique_ptr<SearcherStrategy> ham_proof_strategy(qbf::SkolemPolicy policy) {
  return std::make_unique<HamProof>(std::move(policy));
}
std::unique_ptr<AdversaryPolicy> sink_seeking_policy() { return std::make_unique<SinkSeeking>(); }
std::unique_ptr<AdversaryPolicy> first_consistent_policy() { return std::make_unique<FirstConsistent>(); }

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names = {"dfs", "stpath-proof", "ham-proof", "first"};
  return names;
}

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names = {"optimal", "sink-seeking", "first"};
  return names;
}

std::unique_ptr<SearcherStrategy> make_strategy(const std::string& name, const std::optional<qbf::Formula>& formula) {
  if (name == "dfs") return dfs_walk_strategy();
  if (name == "first") return first_move_strategy();
  if (name == "stpath-proof" || name == "ham-proof") {
    qbf::SkolemPolicy policy;
    if (formula) {
      auto ev = qbf::evaluate(*formula);
      if (ev.policy) policy = *ev.policy;
    }
    return name == "stpath-proof" ? stpath_proof_strategy(policy) : ham_proof_strategy(policy);
  }
  throw StrategyError("unknown strategy '" + name + "'");
}

std::unique_ptr<AdversaryPolicy> make_policy(const std::string& name) {
  if (name == "sink-seeking") return sink_seeking_policy();
  if (name == "first") return first_consistent_policy();
  throw StrategyError("unknown adversary policy '" + name + "'");
}

}  // namespace mapgame::strategies
