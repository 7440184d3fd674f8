#include "mapgame/reductions.hpp"

#include <algorithm>
#include <set>

namespace mapgame::reductions {

using qbf::Formula;
using qbf::Quantifier;

io::json provenance_to_json(const Provenance& p) {
  io::json j;
  j["reduction"] = p.reduction;
  if (!p.base.empty()) j["base"] = p.base;
  j["formula_digest"] = p.formula_digest;
  j["formula"] = p.formula_text;
  io::json c = io::json::object();
  for (const auto& [k, v] : p.constants) c[k] = v;
  j["constants"] = c;
  return j;
}

Provenance provenance_from_json(const io::json& j) {
  Provenance p;
  try {
    p.reduction = j.at("reduction").get<std::string>();
    p.base = j.value("base", std::string());
    p.formula_digest = j.value("formula_digest", std::string());
    p.formula_text = j.value("formula", std::string());
    const io::json constants = j.value("constants", io::json::object());
    for (const auto& [k, v] : constants.items()) p.constants[k] = v.get<long long>();
  } catch (const nlohmann::json::exception& e) {
    throw ReductionError(std::string("malformed provenance: ") + e.what());
  }
  return p;
}

io::Instance to_instance(const GameInstance& gi) { return {gi.graph, gi.spec, provenance_to_json(gi.provenance)}; }

GameInstance from_instance(const io::Instance& inst) {
  GameInstance gi{inst.map, inst.spec, {}};
  if (inst.provenance) gi.provenance = provenance_from_json(*inst.provenance);
  return gi;
}

long long directed_walk_budget(int n, int m) { return 17LL * n + 4LL * m + 1; }

WalkConstants undirected_walk_constants(int n, int m) {
  WalkConstants c;
  c.m2 = 40LL * (n + m);
  c.k = 80LL * n * m + 80LL * n * n + 14LL * n + 4LL * m + 1;
  c.m1 = 10 * c.k;
  return c;
}

namespace {

// Orientation of a gadget edge, read from its first endpoint.
enum class Dir { Forward, Both, Reveal, Sink };
enum class CostClass { Unit, M1, M2 };

struct Tagged {
  VertexId a, b;
  Dir dir;
  CostClass cls;
};

struct Skeleton {
  MixedGraph g;
  std::vector<Tagged> edges;
  std::map<std::string, VertexId> ids;

  VertexId add(const std::string& name) {
    if (ids.count(name)) throw ReductionError("duplicate vertex name " + name);
    VertexId v = g.add_vertex(name);
    ids[name] = v;
    return v;
  }
  VertexId operator[](const std::string& name) const {
    auto it = ids.find(name);
    if (it == ids.end()) throw ReductionError("unknown vertex name " + name);
    return it->second;
  }
  void link(const std::string& a, const std::string& b, Dir d, CostClass c = CostClass::Unit) {
    edges.push_back({(*this)[a], (*this)[b], d, c});
  }
  void sink(const std::string& owner) {
    add(owner + ".sink");
    link(owner, owner + ".sink", Dir::Sink);
  }
};

void require_normalized(const Formula& f) {
  if (!qbf::is_normalized(f)) throw ReductionError("formula is not normalized");
}

Provenance provenance_for(const std::string& name, const Formula& f) {
  return {name, "", f.digest(), f.to_qdimacs(), {}};
}

std::string xv(int var) { return "x" + std::to_string(var) + "."; }
std::string cl(int k) { return "c" + std::to_string(k) + "."; }

struct PathOptions {
  bool variable_sinks = true;
  bool c2_sinks = true;
  bool skip_edges = true;
  bool pq_split = false;
  bool start_gadget = false;  // replace s by the start gadget (rural postman)
};

void add_start_gadget(Skeleton& k) {
  for (const char* n : {"start.s", "start.s'", "start.t", "start.v1_1", "start.v1_2", "start.v2_1", "start.v2_2",
                        "start.v3", "start.v4", "start.v5", "start.v6", "start.s''"})
    k.add(n);
  const std::vector<std::pair<const char*, const char*>> edges = {
      {"start.s", "start.v1_1"},    {"start.s", "start.v1_2"},    {"start.s", "start.v2_1"},
      {"start.s", "start.v2_2"},    {"start.v2_1", "start.v2_2"}, {"start.v2_1", "start.v1_1"},
      {"start.v2_2", "start.v1_1"}, {"start.v2_1", "start.v1_2"}, {"start.v2_2", "start.v1_2"},
      {"start.s'", "start.v2_1"},   {"start.s'", "start.v2_2"},   {"start.t", "start.v1_1"},
      {"start.t", "start.v1_2"},    {"start.v3", "start.s'"},     {"start.v4", "start.s'"},
      {"start.v3", "start.v5"},     {"start.v4", "start.v5"},     {"start.v3", "start.v4"},
      {"start.v5", "start.v6"},     {"start.v6", "start.s''"},    {"start.v3", "start.s''"},
      {"start.v6", "start.t"}};
  for (const auto& [a, b] : edges) k.link(a, b, Dir::Both);
}

Skeleton stpath_skeleton(const Formula& f, const PathOptions& o) {
  require_normalized(f);
  Skeleton k;
  if (o.start_gadget) add_start_gadget(k);
  else k.add("s");
  const std::string entry = o.start_gadget ? "start.s''" : "s";
  const auto cu = CostClass::Unit, m1 = CostClass::M1, m2 = CostClass::M2;
  std::string prev = entry;
  for (const auto& qv : f.prefix) {
    const std::string x = xv(qv.var);
    auto n = [&](const std::string& s) { return x + s; };
    // Part 4
    for (const char* u : {"u1", "u2", "u3", "u4"}) k.add(n(u));
    if (o.variable_sinks)
      for (const char* u : {"u2", "u3", "u4"}) k.sink(n(u));
    k.link(n("u1"), n("u2"), Dir::Forward);
    k.link(n("u1"), n("u3"), Dir::Forward);
    k.link(n("u2"), n("u3"), Dir::Both);
    k.link(n("u2"), n("u4"), Dir::Forward);
    k.link(n("u3"), n("u4"), Dir::Forward);
    // Part 3: with the split, p_j enters the chain and q_j leaves it.
    for (int j = 1; j <= 4; ++j) k.add(n("p" + std::to_string(j)));
    if (o.pq_split)
      for (int j = 1; j <= 4; ++j) k.add(n("q" + std::to_string(j)));
    auto out = [&](int j) { return n((o.pq_split ? "q" : "p") + std::to_string(j)); };
    auto in = [&](int j) { return n("p" + std::to_string(j)); };
    if (o.variable_sinks)
      for (int j = 1; j <= 4; ++j) k.sink(out(j));
    if (o.pq_split)
      for (int j = 1; j <= 4; ++j) k.link(in(j), out(j), Dir::Forward);
    for (int j = 1; j <= 3; ++j) k.link(out(j), in(j + 1), Dir::Forward);
    k.link(n("u3"), in(1), Dir::Reveal, m1);
    k.link(n("u4"), in(1), Dir::Forward);
    for (int j = 2; j <= 4; ++j) k.link(n("u4"), in(j), Dir::Reveal, m1);
    // Part 2
    for (const char* u : {"u5", "v", "w"}) k.add(n(u));
    // Part 1
    for (int j = 1; j <= 5; ++j) k.add(n("v" + std::to_string(j)));
    for (int j = 1; j <= 5; ++j) k.add(n("w" + std::to_string(j)));
    k.add(n("u6"));
    k.add(n("u7"));
    if (o.variable_sinks)
      for (const char* u : {"u6", "v2", "w4"}) k.sink(n(u));
    k.link(out(1), n("u5"), Dir::Reveal, m1);
    k.link(out(4), n("u5"), Dir::Forward);
    if (qv.quantifier == Quantifier::Exists) k.link(out(2), n("v"), Dir::Reveal, m1);
    k.link(out(3), n("v3"), Dir::Reveal, m1);
    k.link(out(3), n("w5"), Dir::Reveal, m1);
    k.link(out(3), n("u7"), Dir::Reveal, m1);
    k.link(n("u5"), n("v"), Dir::Forward);
    k.link(n("u5"), n("w"), Dir::Forward);
    k.link(n("v"), n("v1"), Dir::Forward, m2);
    k.link(n("w"), n("w1"), Dir::Forward, m2);
    for (int j = 1; j <= 4; ++j) {
      k.link(n("v" + std::to_string(j)), n("v" + std::to_string(j + 1)), Dir::Forward);
      k.link(n("w" + std::to_string(j)), n("w" + std::to_string(j + 1)), Dir::Forward);
    }
    k.link(n("v5"), n("u6"), Dir::Forward, m2);
    k.link(n("w5"), n("u6"), Dir::Forward, m2);
    k.link(n("u6"), n("u7"), Dir::Forward);
    k.link(prev, n("u1"), Dir::Forward, cu);
    prev = n("u7");
  }
  const int m = static_cast<int>(f.clauses.size());
  for (int c = 1; c <= m; ++c) {
    const std::string p = cl(c);
    k.add(p + "c1");
    k.add(p + "c2");
    k.sink(p + "c1");
    if (o.c2_sinks) k.sink(p + "c2");
    const auto& clause = f.clauses[c - 1];
    for (std::size_t l = 1; l <= clause.size(); ++l) {
      std::string slot = p + "l" + std::to_string(l);
      k.add(slot + ".a");
      k.add(slot + ".b");
    }
    for (std::size_t l = 1; l <= clause.size(); ++l) {
      std::string slot = p + "l" + std::to_string(l);
      const auto& lit = clause[l - 1];
      k.link(p + "c1", slot + ".a", Dir::Forward);
      k.link(slot + ".a", slot + ".b", Dir::Forward);
      k.link(slot + ".b", p + "c2", Dir::Forward);
      k.link(xv(lit.var) + (lit.negated ? "w4" : "v2"), slot + ".a", Dir::Reveal, m1);
    }
  }
  k.add("t");
  if (m == 0) {
    k.link(prev, "t", Dir::Forward);
  } else {
    k.link(prev, cl(1) + "c1", Dir::Forward);
    for (int c = 1; c < m; ++c) k.link(cl(c) + "c2", cl(c + 1) + "c1", Dir::Forward);
    k.link(cl(m) + "c2", "t", Dir::Forward);
    if (o.skip_edges) {
      for (int c = 1; c < m; ++c) k.link(cl(c) + "c1", cl(c + 1) + "c1", Dir::Reveal, m1);
      k.link(cl(m) + "c1", "t", Dir::Reveal, m1);
    }
  }
  k.g.start = o.start_gadget ? k["start.s"] : k["s"];
  if (!o.start_gadget) k.g.target = k["t"];
  return k;
}

Cost cost_of(CostClass c, const WalkConstants* w) {
  if (!w || c == CostClass::Unit) return 1;
  return c == CostClass::M1 ? w->m1 : w->m2;
}

MixedGraph undirected(const Skeleton& k, const WalkConstants* w = nullptr) {
  MixedGraph g = k.g;
  for (const auto& e : k.edges) g.add_edge(e.a, e.b, cost_of(e.cls, w));
  g.canonicalize();
  return g;
}

MixedGraph directed(const Skeleton& k) {
  MixedGraph g = k.g;
  for (const auto& e : k.edges) {
    g.add_arc(e.a, e.b);
    if (e.dir == Dir::Both) g.add_arc(e.b, e.a);
  }
  g.canonicalize();
  return g;
}

GameSpec spec_for(const MixedGraph& g, Constraint c, Objective o) {
  GameSpec s;
  s.constraint = c;
  s.objective = o;
  s.map_vertex_count = g.vertex_count;
  return s;
}

GameInstance finish(MixedGraph g, GameSpec s, Provenance p) {
  g.canonicalize();
  s.map_vertex_count = g.vertex_count;
  auto v = validate(g);
  if (!v.empty()) throw ReductionError("construction produced an invalid graph: " + v.front());
  return {std::move(g), s, std::move(p)};
}

int clause_count(const Formula& f) { return static_cast<int>(f.clauses.size()); }
int var_count(const Formula& f) { return static_cast<int>(f.prefix.size()); }

}  // namespace

GameInstance build_stpath_undirected(const Formula& f) {
  auto k = stpath_skeleton(f, {});
  MixedGraph g = undirected(k);
  return finish(g, spec_for(g, Constraint::Path, Objective::ReachTarget), provenance_for("stpath-u", f));
}

GameInstance build_stpath_directed(const Formula& f) {
  PathOptions o;
  o.c2_sinks = false;
  o.skip_edges = false;
  auto k = stpath_skeleton(f, o);
  MixedGraph g = directed(k);
  return finish(g, spec_for(g, Constraint::Path, Objective::ReachTarget), provenance_for("stpath-d", f));
}

GameInstance build_sttrail_undirected(const Formula& f) {
  PathOptions o;
  o.pq_split = true;
  auto k = stpath_skeleton(f, o);
  MixedGraph g = undirected(k);
  return finish(g, spec_for(g, Constraint::Trail, Objective::ReachTarget), provenance_for("sttrail-u", f));
}

GameInstance build_shortest_walk_directed(const Formula& f) {
  PathOptions o;
  o.c2_sinks = false;
  o.skip_edges = false;
  auto k = stpath_skeleton(f, o);
  MixedGraph g = directed(k);
  const long long budget = directed_walk_budget(var_count(f), clause_count(f));
  VertexId tp = g.add_vertex("t'");
  for (const auto& [v, name] : k.g.annotations)
    if (name.size() > 5 && name.compare(name.size() - 5, 5, ".sink") == 0) g.add_arc(v, tp);
  g.add_arc(*g.target, tp);
  VertexId prev = tp;
  for (long long i = 1; i < 2 * budget; ++i) {
    VertexId r = g.add_vertex("return." + std::to_string(i));
    g.add_arc(prev, r);
    prev = r;
  }
  g.add_arc(prev, g.start);
  GameSpec s = spec_for(g, Constraint::Walk, Objective::ReachTarget);
  s.budget = budget;
  Provenance p = provenance_for("walk-d", f);
  p.constants["k"] = budget;
  return finish(g, s, p);
}

GameInstance build_shortest_walk_undirected(const Formula& f) {
  PathOptions o;
  o.variable_sinks = false;
  o.c2_sinks = false;
  auto k = stpath_skeleton(f, o);
  WalkConstants w = undirected_walk_constants(var_count(f), clause_count(f));
  MixedGraph g = undirected(k, &w);
  GameSpec s = spec_for(g, Constraint::Walk, Objective::ReachTarget);
  s.budget = w.k;
  Provenance p = provenance_for("walk-u", f);
  p.constants = {{"M1", w.m1}, {"M2", w.m2}, {"k", w.k}};
  return finish(g, s, p);
}

namespace {

// Endpoint from which the searcher discovers a cost-M1 edge.
int reveal_priority(const std::string& name) {
  static const std::vector<std::string> roles = {"u3", "u4", "p1", "p2", "p3", "v2", "w4", "c1"};
  auto dot = name.rfind('.');
  std::string role = dot == std::string::npos ? name : name.substr(dot + 1);
  for (std::size_t i = 0; i < roles.size(); ++i)
    if (roles[i] == role) return static_cast<int>(i);
  return 1000;
}

}  // namespace

GameInstance expand_unit_costs(const GameInstance& gi) {
  if (gi.provenance.reduction != "walk-u") throw ReductionError("expand_unit_costs needs a walk-u instance");
  const auto& c = gi.provenance.constants;
  if (!c.count("M1") || !c.count("M2")) throw ReductionError("walk-u provenance lacks M1/M2");
  const Cost m1 = c.at("M1"), m2 = c.at("M2");
  const MixedGraph& src = gi.graph;
  MixedGraph g;
  g.vertex_count = src.vertex_count;
  g.start = src.start;
  g.target = src.target;
  g.annotations = src.annotations;
  auto name = [&](VertexId v) {
    auto it = src.annotations.find(v);
    return it == src.annotations.end() ? std::to_string(v) : it->second;
  };
  std::set<VertexId> pools;
  for (const auto& e : src.edges) {
    if (e.cost == m1) {
      int pa = reveal_priority(name(e.a)), pb = reveal_priority(name(e.b));
      VertexId at = pa < pb || (pa == pb && e.a < e.b) ? e.a : e.b;
      if (pa == 1000 && pb == 1000) throw ReductionError("cannot place the sink pool for an M1 edge");
      pools.insert(at);
      g.add_edge(e.a, e.b, 1);
    } else if (e.cost == m2) {
      VertexId prev = e.a;
      for (Cost i = 1; i < m2; ++i) {
        VertexId r = g.add_vertex(name(e.a) + "~" + name(e.b) + "." + std::to_string(i));
        g.add_edge(prev, r, 1);
        prev = r;
      }
      g.add_edge(prev, e.b, 1);
    } else if (e.cost == 1) {
      g.add_edge(e.a, e.b, 1);
    } else {
      throw ReductionError("unexpected edge cost " + std::to_string(e.cost));
    }
  }
  for (VertexId v : pools) {
    std::string owner = name(v);
    for (Cost i = 1; i <= m1; ++i) {
      VertexId sink = g.add_vertex(owner + ".pool" + std::to_string(i) + ".sink");
      g.add_edge(v, sink, 1);
    }
  }
  GameSpec s = gi.spec;
  Provenance p = gi.provenance;
  p.reduction = "walk-u-unit";
  p.base = "walk-u";
  return finish(g, s, p);
}

namespace {

Skeleton ham_skeleton(const Formula& f, bool with_t, bool start_gadget) {
  require_normalized(f);
  const int m = clause_count(f);
  if (m == 0) throw ReductionError("Hamiltonian constructions need at least one clause");
  const int len = 4 * m;
  Skeleton k;
  if (start_gadget) add_start_gadget(k);
  else k.add("s");
  std::string prev = start_gadget ? "start.s''" : "s";
  for (const auto& qv : f.prefix) {
    const std::string x = xv(qv.var);
    auto n = [&](const std::string& s) { return x + s; };
    auto vj = [&](int j) { return n("v" + std::to_string(j)); };
    auto mj = [&](int j) { return n("m" + std::to_string(j)); };
    auto wj = [&](int j) { return n("w" + std::to_string(j)); };
    for (int u = 1; u <= 9; ++u) k.add(n("u" + std::to_string(u)));
    k.add(n("u0"));
    for (int j = 1; j <= len; ++j) {
      k.add(vj(j));
      k.add(mj(j));
      k.add(wj(j));
    }
    k.link(prev, n("u1"), Dir::Forward);
    // Part 3
    k.link(n("u1"), n("u2"), Dir::Forward);
    k.link(n("u1"), n("u3"), Dir::Forward);
    k.link(n("u2"), n("u3"), Dir::Both);
    k.link(n("u2"), n("u4"), Dir::Forward);
    k.link(n("u3"), n("u4"), Dir::Forward);
    k.link(n("u4"), n("u5"), Dir::Forward);
    k.link(n("u5"), n("u6"), Dir::Forward);
    k.link(n("u3"), n("u7"), Dir::Reveal);
    for (int j = 2; j <= len; ++j) {
      k.link(n("u3"), vj(j), Dir::Reveal);
      k.link(n("u3"), wj(j), Dir::Reveal);
    }
    if (qv.quantifier == Quantifier::Exists) k.link(n("u3"), vj(1), Dir::Reveal);
    // Part 2
    k.link(n("u6"), n("u7"), Dir::Forward);
    k.link(n("u7"), n("u8"), Dir::Forward);
    k.link(n("u6"), n("u9"), Dir::Reveal);
    for (int j = 1; j <= len; ++j)
      if (j % 4 >= 2) k.link(n("u6"), mj(j), Dir::Reveal);
    // Part 1
    k.link(n("u8"), vj(1), Dir::Forward);
    k.link(n("u8"), wj(1), Dir::Forward);
    for (int j = 1; j <= len; ++j) {
      k.link(vj(j), mj(j), Dir::Both);
      k.link(mj(j), wj(j), Dir::Both);
      if (j < len) {
        k.link(vj(j), wj(j + 1), Dir::Forward);
        k.link(wj(j), vj(j + 1), Dir::Forward);
      }
    }
    k.link(vj(len), n("u9"), Dir::Forward);
    k.link(wj(len), n("u9"), Dir::Forward);
    k.link(n("u9"), n("u0"), Dir::Forward);
    prev = n("u0");
  }
  for (int c = 1; c <= m; ++c) k.add("c" + std::to_string(c));
  for (int c = 1; c <= m; ++c) {
    std::set<std::pair<std::string, std::string>> seen;
    const std::string cv = "c" + std::to_string(c);
    for (const auto& lit : f.clauses[c - 1]) {
      const std::string x = xv(lit.var);
      std::string out = x + (lit.negated ? "v" : "w") + std::to_string(4 * c - 2);
      std::string in = x + (lit.negated ? "w" : "v") + std::to_string(4 * c - 1);
      // Index 4c-2 leaves the gadget towards the clause, 4c-1 returns.
      if (seen.insert({out, cv}).second) k.link(out, cv, Dir::Forward);
      if (seen.insert({cv, in}).second) k.link(cv, in, Dir::Forward);
    }
  }
  if (with_t) {
    k.add("t");
    k.link(prev, "t", Dir::Forward);
  }
  k.g.start = start_gadget ? k["start.s"] : k["s"];
  if (with_t && !start_gadget) k.g.target = k["t"];
  return k;
}

}  // namespace

GameInstance build_ham_path_undirected(const Formula& f) {
  auto k = ham_skeleton(f, true, false);
  MixedGraph g = undirected(k);
  return finish(g, spec_for(g, Constraint::Path, Objective::VisitAll), provenance_for("ham-u", f));
}

GameInstance build_ham_path_directed(const Formula& f) {
  auto k = ham_skeleton(f, true, false);
  MixedGraph g = directed(k);
  return finish(g, spec_for(g, Constraint::Path, Objective::VisitAll), provenance_for("ham-d", f));
}

GameInstance build_ham_cycle(const Formula& f, bool is_directed) {
  if (is_directed) {
    auto k = ham_skeleton(f, false, false);
    MixedGraph g = directed(k);
    std::string last = xv(f.prefix.back().var) + "u0";
    g.add_arc(k[last], g.start);
    g.target.reset();
    return finish(g, spec_for(g, Constraint::Path, Objective::VisitAllAndReturn), provenance_for("hamcycle-d", f));
  }
  auto k = ham_skeleton(f, false, true);
  std::string last = xv(f.prefix.back().var) + "u0";
  k.link("start.t", last, Dir::Both);
  MixedGraph g = undirected(k);
  return finish(g, spec_for(g, Constraint::Path, Objective::VisitAllAndReturn), provenance_for("hamcycle-u", f));
}

GameInstance build_stacker_crane(const Formula& f) {
  auto k = stpath_skeleton(f, {});
  MixedGraph g = undirected(k);
  VertexId t = *g.target;
  g.add_arc(t, g.start);
  g.required.push_back({ElementKind::Arc, t, g.start});
  g.target.reset();
  return finish(g, spec_for(g, Constraint::Walk, Objective::TraverseRequired), provenance_for("stacker", f));
}

GameInstance build_rural_postman(const Formula& f) {
  PathOptions o;
  o.start_gadget = true;
  auto k = stpath_skeleton(f, o);
  k.add("rural.v");
  std::string last = xv(f.prefix.back().var) + "u7";
  k.link("rural.v", "start.t", Dir::Both);
  k.link("rural.v", last, Dir::Both);
  MixedGraph g = undirected(k);
  VertexId v = k["rural.v"], u = k[last];
  g.required.push_back({ElementKind::Edge, std::min(v, u), std::max(v, u)});
  g.target.reset();
  return finish(g, spec_for(g, Constraint::Walk, Objective::TraverseRequired), provenance_for("rural", f));
}

ThresholdKind parse_threshold_kind(const std::string& s) {
  if (s == "longest-path") return ThresholdKind::LongestPath;
  if (s == "longest-cycle") return ThresholdKind::LongestCycle;
  if (s == "metric-tsp") return ThresholdKind::MetricTsp;
  if (s == "bottleneck-tsp") return ThresholdKind::BottleneckTsp;
  throw ReductionError("unknown threshold kind '" + s + "'");
}

GameInstance derive_threshold_variants(const GameInstance& gi, ThresholdKind kind) {
  const std::string& base = gi.provenance.reduction;
  const bool path_base = base == "ham-u" || base == "ham-d";
  const bool cycle_base = base == "hamcycle-u" || base == "hamcycle-d";
  if (!path_base && !cycle_base) throw ReductionError("threshold variants need a Hamiltonian instance");
  GameInstance out = gi;
  out.provenance.base = base;
  const int n = gi.graph.vertex_count;
  switch (kind) {
    case ThresholdKind::LongestPath:
    case ThresholdKind::LongestCycle: {
      bool cycle = kind == ThresholdKind::LongestCycle;
      if (cycle != cycle_base) throw ReductionError("longest-path needs a path instance, longest-cycle a cycle instance");
      out.spec.objective = Objective::VisitAtLeast;
      out.spec.min_visits = n;
      out.spec.closed_tour = cycle;
      out.provenance.reduction = cycle ? "longest-cycle" : "longest-path";
      out.provenance.constants["threshold"] = n;
      break;
    }
    case ThresholdKind::MetricTsp:
    case ThresholdKind::BottleneckTsp: {
      if (!gi.graph.arcs.empty()) throw ReductionError("metric completion is defined for undirected instances");
      MixedGraph g = gi.graph;
      std::set<std::pair<VertexId, VertexId>> present;
      for (auto& e : g.edges) {
        e.cost = 1;
        present.insert({e.a, e.b});
      }
      for (VertexId a = 0; a < n; ++a)
        for (VertexId b = a + 1; b < n; ++b)
          if (!present.count({a, b})) g.add_edge(a, b, 2);
      g.target.reset();
      GameSpec s = spec_for(g, Constraint::Walk, Objective::VisitAllAndReturn);
      bool metric = kind == ThresholdKind::MetricTsp;
      s.budget = metric ? n : 1;
      s.budget_mode = metric ? BudgetMode::Sum : BudgetMode::Max;
      out.graph = std::move(g);
      out.spec = s;
      out.provenance.reduction = metric ? "metric-tsp" : "bottleneck-tsp";
      out.provenance.constants["threshold"] = *s.budget;
      break;
    }
  }
  return finish(out.graph, out.spec, out.provenance);
}

const std::vector<std::string>& variant_names() {
  static const std::vector<std::string> names = {
      "stpath-u", "stpath-d",   "sttrail-u",  "walk-d",  "walk-u",       "walk-u-unit",   "ham-u",     "ham-d",
      "hamcycle-u", "hamcycle-d", "stacker", "rural", "longest-path", "longest-cycle", "metric-tsp", "bottleneck-tsp"};
  return names;
}

GameInstance build_variant(const std::string& v, const Formula& f) {
  if (v == "stpath-u") return build_stpath_undirected(f);
  if (v == "stpath-d") return build_stpath_directed(f);
  if (v == "sttrail-u") return build_sttrail_undirected(f);
  if (v == "walk-d") return build_shortest_walk_directed(f);
  if (v == "walk-u") return build_shortest_walk_undirected(f);
  if (v == "walk-u-unit") return expand_unit_costs(build_shortest_walk_undirected(f));
  if (v == "ham-u") return build_ham_path_undirected(f);
  if (v == "ham-d") return build_ham_path_directed(f);
  if (v == "hamcycle-u") return build_ham_cycle(f, false);
  if (v == "hamcycle-d") return build_ham_cycle(f, true);
  if (v == "stacker") return build_stacker_crane(f);
  if (v == "rural") return build_rural_postman(f);
  if (v == "longest-path") return derive_threshold_variants(build_ham_path_undirected(f), ThresholdKind::LongestPath);
  if (v == "longest-cycle") return derive_threshold_variants(build_ham_cycle(f, false), ThresholdKind::LongestCycle);
  if (v == "metric-tsp") return derive_threshold_variants(build_ham_cycle(f, false), ThresholdKind::MetricTsp);
  if (v == "bottleneck-tsp") return derive_threshold_variants(build_ham_cycle(f, false), ThresholdKind::BottleneckTsp);
  throw ReductionError("unknown variant '" + v + "'");
}

}  // namespace mapgame::reductions
