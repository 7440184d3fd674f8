#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace mapgame::oracles {

bool naive_qbf(const qbf::Formula& f) {
  std::map<int, bool> value;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == f.prefix.size()) {
      for (const auto& clause : f.clauses) {
        bool sat = false;
        for (const auto& lit : clause) sat |= value[lit.var] != lit.negated;
        if (!sat) return false;
      }
      return true;
    }
    const auto& q = f.prefix[i];
    bool any = false, all = true;
    for (bool b : {false, true}) {
      value[q.var] = b;
      bool r = rec(i + 1);
      any |= r;
      all &= r;
    }
    value.erase(q.var);
    return q.quantifier == qbf::Quantifier::Exists ? any : all;
  };
  return rec(0);
}

std::vector<qbf::Formula> small_formula_family(int max_vars, int max_clauses) {
  std::vector<qbf::Formula> out;
  for (int n = 1; n <= max_vars; ++n) {
    std::vector<qbf::Literal> literals;
    for (int v = 1; v <= n; ++v) {
      literals.push_back({v, false});
      literals.push_back({v, true});
    }
    std::vector<qbf::Clause> clauses;
    const int L = static_cast<int>(literals.size());
    for (int mask = 1; mask < (1 << L); ++mask) {
      if (__builtin_popcount(mask) > 3) continue;
      qbf::Clause c;
      for (int i = 0; i < L; ++i)
        if (mask & (1 << i)) c.push_back(literals[i]);
      clauses.push_back(c);
    }
    std::vector<std::vector<int>> picks;
    std::vector<int> cur;
    std::function<void(int, int)> choose = [&](int from, int left) {
      if (!cur.empty()) picks.push_back(cur);
      if (left == 0) return;
      for (int i = from; i < static_cast<int>(clauses.size()); ++i) {
        cur.push_back(i);
        choose(i, left - 1);
        cur.pop_back();
      }
    };
    choose(0, max_clauses);
    for (int pattern = 0; pattern < (1 << n); ++pattern) {
      for (const auto& pick : picks) {
        qbf::Formula f;
        f.variable_count = n;
        for (int v = 1; v <= n; ++v)
          f.prefix.push_back({(pattern >> (v - 1)) & 1 ? qbf::Quantifier::Forall : qbf::Quantifier::Exists, v});
        for (int i : pick) f.clauses.push_back(clauses[i]);
        out.push_back(std::move(f));
      }
    }
  }
  return out;
}

qbf::Formula normalized_formula(int n, int m, Rng& rng) {
  qbf::Formula f;
  f.variable_count = n;
  for (int v = 1; v <= n; ++v) f.prefix.push_back({v % 2 ? qbf::Quantifier::Exists : qbf::Quantifier::Forall, v});
  std::uniform_int_distribution<int> var(1, n);
  std::bernoulli_distribution neg(0.5);
  for (int c = 0; c < m; ++c) {
    qbf::Clause clause;
    for (int l = 0; l < 3; ++l) clause.push_back({var(rng), neg(rng)});
    f.clauses.push_back(clause);
  }
  return f;
}

namespace {

std::vector<std::vector<VertexId>> successors(const MixedGraph& g, bool reversed) {
  std::vector<std::vector<VertexId>> adj(g.vertex_count);
  for (const auto& e : g.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (const auto& a : g.arcs) {
    if (reversed) adj[a.to].push_back(a.from);
    else adj[a.from].push_back(a.to);
  }
  return adj;
}

std::vector<bool> reach(const std::vector<std::vector<VertexId>>& adj, VertexId from) {
  std::vector<bool> seen(adj.size(), false);
  std::deque<VertexId> q{from};
  seen[from] = true;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    for (VertexId u : adj[v])
      if (!seen[u]) {
        seen[u] = true;
        q.push_back(u);
      }
  }
  return seen;
}

}  // namespace

bool bfs_reachable(const MixedGraph& g, VertexId from, VertexId to) { return reach(successors(g, false), from)[to]; }

bool strongly_connected(const MixedGraph& g) {
  auto fwd = reach(successors(g, false), 0);
  auto bwd = reach(successors(g, true), 0);
  for (int v = 0; v < g.vertex_count; ++v)
    if (!fwd[v] || !bwd[v]) return false;
  return true;
}

int stpath_vertices(int n, int m) {
  const int part1 = 10 + 2 + 3;  // v/w chains, u6, u7, sinks at u6, v2, w4
  const int part2 = 3;           // u5, v, w
  const int part3 = 4 + 4;       // p1..p4 with a sink each
  const int part4 = 4 + 3;       // u1..u4, sinks at u2..u4
  const int clause = 2 + 2 + 3 * 2;
  return n * (part1 + part2 + part3 + part4) + m * clause + 2;
}

int stpath_directed_vertices(int n, int m) { return stpath_vertices(n, m) - m; }

int ham_vertices(int n, int m) {
  const int per_variable = 10 + 3 * (4 * m);  // u1..u9, u0 and 4m triples
  return n * per_variable + m + 2;
}

long long walk_budget_directed(int n, int m) { return 17LL * n + 4LL * m + 1; }
long long walk_m2(int n, int m) { return 40LL * (n + m); }
long long walk_k(int n, int m) { return 80LL * n * m + 80LL * n * n + 14LL * n + 4LL * m + 1; }
long long walk_m1(int n, int m) { return 10 * walk_k(n, m); }

InjectionTracker::InjectionTracker(const Game& g) : g_(&g) { placements_.push_back({g.map().start}); }

namespace {

Reveal project(const Game& g, const GameState& s, const std::vector<VertexId>& phi) {
  std::map<VertexId, LabelId> owner;
  for (LabelId l = 0; l < static_cast<LabelId>(phi.size()); ++l) owner[phi[l]] = l;
  const auto& target = g.map().target;
  Reveal r;
  std::map<std::pair<Link, bool>, int> fresh;
  for (const auto& nb : g.index().neighbors(phi[s.current])) {
    Link v = g.visible(nb.link);
    if (v.empty()) continue;
    auto it = owner.find(nb.vertex);
    if (it != owner.end()) {
      Link known = s.known(s.current, it->second);
      if (known.merged(v) != known) r.known.push_back({it->second, v});
    } else {
      ++fresh[{v, target && *target == nb.vertex}];
    }
  }
  for (const auto& [key, count] : fresh) r.fresh.push_back({key.first, key.second, count});
  std::sort(r.known.begin(), r.known.end());
  std::sort(r.fresh.begin(), r.fresh.end());
  return r;
}

}  // namespace

std::set<Reveal> InjectionTracker::projections(const GameState& s) const {
  std::set<Reveal> out;
  for (const auto& phi : placements_) out.insert(project(*g_, s, phi));
  return out;
}

InjectionTracker InjectionTracker::after(const GameState& s, const Reveal& r) const {
  InjectionTracker next(*g_);
  next.placements_.clear();
  const auto& target = g_->map().target;
  for (const auto& phi : placements_) {
    if (project(*g_, s, phi) != r) continue;
    std::set<VertexId> used(phi.begin(), phi.end());
    // Unlabeled neighbors per fresh group, in the order the engine creates labels.
    std::vector<std::vector<VertexId>> pools;
    for (const auto& grp : r.fresh) {
      std::vector<VertexId> pool;
      for (const auto& nb : g_->index().neighbors(phi[s.current])) {
        if (used.count(nb.vertex)) continue;
        if (g_->visible(nb.link) == grp.link && (target && *target == nb.vertex) == grp.is_target)
          pool.push_back(nb.vertex);
      }
      pools.push_back(pool);
    }
    std::function<void(std::size_t, std::vector<VertexId>&)> extend = [&](std::size_t gi, std::vector<VertexId>& acc) {
      if (gi == pools.size()) {
        next.placements_.push_back(acc);
        return;
      }
      auto pool = pools[gi];
      std::sort(pool.begin(), pool.end());
      do {
        std::size_t mark = acc.size();
        for (int i = 0; i < r.fresh[gi].count; ++i) acc.push_back(pool[i]);
        extend(gi + 1, acc);
        acc.resize(mark);
      } while (std::next_permutation(pool.begin(), pool.end()));
    };
    std::vector<VertexId> acc = phi;
    extend(0, acc);
  }
  return next;
}

}  // namespace mapgame::oracles
