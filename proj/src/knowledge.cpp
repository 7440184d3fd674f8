#include "mapgame/knowledge.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mapgame::knowledge {
namespace {

using Signature = std::vector<std::pair<LabelId, Link>>;

struct ClassKey {
  Signature sig;
  bool target = false;
  friend auto operator<=>(const ClassKey&, const ClassKey&) = default;
};

// Signature of an unvisited label: its links as seen from the closed labels.
ClassKey label_key(const GameState& s, LabelId f) {
  ClassKey k;
  for (const auto& e : s.adjacency[f]) k.sig.push_back({e.label, e.link.reversed()});
  k.target = s.labels[f].is_target;
  return k;
}

class Search {
 public:
  Search(const GameState& s, const Game& g) : s_(s), g_(g), idx_(g.index()) {
    int n = s.label_count();
    emb_.image.assign(n, -1);
    emb_.owner.assign(g.map().vertex_count, -1);
    parent_.assign(n, -1);
    closed_degree_.assign(n, 0);
    for (LabelId l = 0; l < n; ++l) {
      if (s.labels[l].closed)
        for (const auto& e : s.adjacency[l])
          if (!g.visible(e.link).empty()) ++closed_degree_[l];
      if (!s.labels[l].visited) label_keys_.push_back(label_key(s, l));
    }
    std::sort(label_keys_.begin(), label_keys_.end());
    // Breadth-first order over visited labels from the start label.
    std::vector<bool> seen(n, false);
    order_.push_back(0);
    seen[0] = true;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      LabelId a = order_[i];
      for (const auto& e : s.adjacency[a]) {
        if (seen[e.label] || !s.labels[e.label].visited) continue;
        seen[e.label] = true;
        parent_[e.label] = a;
        order_.push_back(e.label);
      }
    }
    slot_.assign(g.map().vertex_count, -1);
  }

  bool run(const std::function<bool(const CoreEmbedding&)>& visit) {
    visit_ = &visit;
    rec(0);
    return !stopped_;
  }

 private:
  bool closed(LabelId l) const { return s_.labels[l].closed; }

  bool pair_ok(LabelId a, LabelId b) const {
    bool ca = closed(a), cb = closed(b);
    if (!ca && !cb) return true;
    if (!ca) {
      std::swap(a, b);
      std::swap(ca, cb);
    }
    Link actual = idx_.link(emb_.image[a], emb_.image[b]);
    if (!cb) actual = g_.visible(actual);
    return actual == s_.known(a, b);
  }

  bool place(LabelId l, VertexId x) {
    if (emb_.owner[x] != -1) return false;
    bool is_target_vertex = g_.map().target && *g_.map().target == x;
    if (s_.labels[l].is_target != is_target_vertex) return false;
    if ((l == 0) != (x == g_.map().start)) return false;
    if (closed(l) && g_.visible_degree(x) != closed_degree_[l]) return false;
    emb_.image[l] = x;
    emb_.owner[x] = l;
    bool ok = true;
    for (const auto& e : s_.adjacency[l]) {
      if (emb_.image[e.label] == -1) continue;
      if (!pair_ok(l, e.label)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      for (const auto& nb : idx_.neighbors(x)) {
        LabelId b = emb_.owner[nb.vertex];
        if (b == -1 || !s_.known(l, b).empty()) continue;
        if (!pair_ok(l, b)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) unplace(l);
    return ok;
  }

  void unplace(LabelId l) {
    emb_.owner[emb_.image[l]] = -1;
    emb_.image[l] = -1;
  }

  // Unvisited labels must match the unlabeled vertices next to closed images
  // class by class, where a class is the multiset of links from closed labels.
  bool fringe_ok() {
    touched_.clear();
    sigs_.clear();
    for (LabelId c = 0; c < s_.label_count(); ++c) {
      if (!closed(c)) continue;
      VertexId x = emb_.image[c];
      for (const auto& nb : idx_.neighbors(x)) {
        if (emb_.owner[nb.vertex] != -1) continue;
        Link v = g_.visible(nb.link);
        if (v.empty()) continue;
        int& slot = slot_[nb.vertex];
        if (slot == -1) {
          slot = static_cast<int>(sigs_.size());
          touched_.push_back(nb.vertex);
          sigs_.push_back({});
          sigs_.back().target = g_.map().target && *g_.map().target == nb.vertex;
        }
        sigs_[slot].sig.push_back({c, v});
      }
    }
    for (VertexId y : touched_) slot_[y] = -1;
    if (sigs_.size() != label_keys_.size()) return false;
    std::sort(sigs_.begin(), sigs_.end());
    return sigs_ == label_keys_;
  }

  void rec(std::size_t i) {
    if (stopped_) return;
    if (i == order_.size()) {
      if (fringe_ok() && !(*visit_)(emb_)) stopped_ = true;
      return;
    }
    LabelId l = order_[i];
    if (i == 0) {
      if (place(l, g_.map().start)) {
        rec(i + 1);
        unplace(l);
      }
      return;
    }
    VertexId px = emb_.image[parent_[l]];
    for (const auto& nb : idx_.neighbors(px)) {
      if (stopped_) return;
      if (!place(l, nb.vertex)) continue;
      rec(i + 1);
      unplace(l);
    }
  }

  const GameState& s_;
  const Game& g_;
  const MapIndex& idx_;
  CoreEmbedding emb_;
  std::vector<LabelId> order_, parent_;
  std::vector<int> closed_degree_;
  std::vector<ClassKey> label_keys_;
  std::vector<int> slot_;
  std::vector<VertexId> touched_;
  std::vector<ClassKey> sigs_;
  const std::function<bool(const CoreEmbedding&)>* visit_ = nullptr;
  bool stopped_ = false;
};

// Splits `labels` into consecutive parts of the given sizes, either in every
// distinct way or only canonically.
void assignments(const std::vector<LabelId>& labels, const std::vector<int>& sizes, bool all,
                 const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<int> part(labels.size(), -1);
  std::vector<int> left = sizes;
  if (!all) {
    std::size_t i = 0;
    for (std::size_t p = 0; p < sizes.size(); ++p)
      for (int k = 0; k < sizes[p]; ++k) part[i++] = static_cast<int>(p);
    emit(part);
    return;
  }
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == labels.size()) {
      emit(part);
      return;
    }
    for (std::size_t p = 0; p < left.size(); ++p) {
      if (left[p] == 0) continue;
      --left[p];
      part[i] = static_cast<int>(p);
      go(i + 1);
      ++left[p];
    }
  };
  go(0);
}

}  // namespace

bool for_each_embedding(const GameState& s, const Game& g,
                        const std::function<bool(const CoreEmbedding&)>& visit) {
  Search search(s, g);
  return search.run(visit);
}

bool embedding_exists(const GameState& s, const Game& g) {
  return !for_each_embedding(s, g, [](const CoreEmbedding&) { return false; });
}

std::vector<std::vector<VertexId>> label_images(const GameState& s, const Game& g, const CoreEmbedding& emb) {
  const MapIndex& idx = g.index();
  std::map<VertexId, ClassKey> keys;
  for (LabelId c = 0; c < s.label_count(); ++c) {
    if (!s.labels[c].closed) continue;
    for (const auto& nb : idx.neighbors(emb.image[c])) {
      if (emb.owner[nb.vertex] != -1) continue;
      Link v = g.visible(nb.link);
      if (v.empty()) continue;
      auto [it, fresh] = keys.try_emplace(nb.vertex);
      if (fresh) it->second.target = g.map().target && *g.map().target == nb.vertex;
      it->second.sig.push_back({c, v});
    }
  }
  std::map<ClassKey, std::vector<VertexId>> by_key;
  for (const auto& [v, k] : keys) by_key[k].push_back(v);
  std::vector<std::vector<VertexId>> out(s.label_count());
  for (LabelId l = 0; l < s.label_count(); ++l) {
    if (s.labels[l].visited) {
      out[l] = {emb.image[l]};
      continue;
    }
    auto it = by_key.find(label_key(s, l));
    if (it != by_key.end()) out[l] = it->second;
  }
  return out;
}

std::vector<RevealOption> enumerate_reveal_options(const GameState& s, const Game& g, Symmetry symmetry) {
  if (s.turn != Turn::AdversaryToReveal) throw GameError("enumerate_reveals: not the adversary's turn");
  const MapIndex& idx = g.index();
  const LabelId cur = s.current;
  std::map<ClassKey, std::vector<LabelId>> label_classes;
  for (LabelId l = 0; l < s.label_count(); ++l)
    if (!s.labels[l].visited) label_classes[label_key(s, l)].push_back(l);
  const std::optional<VertexId> target = g.map().target;

  std::map<Reveal, std::set<VertexId>> found;
  bool any = false;
  for_each_embedding(s, g, [&](const CoreEmbedding& emb) {
    any = true;
    VertexId x = emb.image[cur];
    Reveal base;
    std::map<std::pair<Link, bool>, int> fresh;
    // Class -> (relation -> count) for unlabeled-but-known neighbors of x.
    std::map<const ClassKey*, std::map<Link, int>> split;
    std::vector<std::pair<ClassKey, Link>> fringe_hits;
    for (const auto& nb : idx.neighbors(x)) {
      Link r = g.visible(nb.link);
      if (r.empty()) continue;
      LabelId b = emb.owner[nb.vertex];
      if (b != -1) {
        Link known = s.known(cur, b);
        if (known.merged(r) != known) base.known.push_back({b, r});
        continue;
      }
      ClassKey key;
      for (const auto& nb2 : idx.neighbors(nb.vertex)) {
        LabelId c = emb.owner[nb2.vertex];
        if (c == -1 || !s.labels[c].closed) continue;
        Link v = g.visible(nb2.link.reversed());
        if (!v.empty()) key.sig.push_back({c, v});
      }
      std::sort(key.sig.begin(), key.sig.end());
      bool is_target = target && *target == nb.vertex;
      if (key.sig.empty()) {
        ++fresh[{r, is_target}];
        continue;
      }
      key.target = is_target;
      fringe_hits.push_back({std::move(key), r});
    }
    for (const auto& [rt, count] : fresh) base.fresh.push_back({rt.first, rt.second, count});
    std::sort(base.fresh.begin(), base.fresh.end());

    // Per class, the relation of each class member to x.
    std::map<ClassKey, std::map<Link, int>> per_class;
    for (const auto& [key, r] : fringe_hits) ++per_class[key][r];
    struct Part {
      const std::vector<LabelId>* labels;
      std::vector<Link> relations;  // index = part id; Link{} = not adjacent
      std::vector<int> sizes;
    };
    std::vector<Part> parts;
    for (const auto& [key, rel] : per_class) {
      auto it = label_classes.find(key);
      if (it == label_classes.end()) throw GameError("enumerate_reveals: fringe class without labels");
      Part p{&it->second, {}, {}};
      int linked = 0;
      for (const auto& [r, cnt] : rel) {
        p.relations.push_back(r);
        p.sizes.push_back(cnt);
        linked += cnt;
      }
      int rest = static_cast<int>(it->second.size()) - linked;
      if (rest < 0) throw GameError("enumerate_reveals: class count mismatch");
      if (rest > 0) {
        p.relations.push_back(Link{});
        p.sizes.push_back(rest);
      }
      parts.push_back(std::move(p));
    }
    bool all = symmetry == Symmetry::FreshOnly;
    std::function<void(std::size_t, Reveal&)> product = [&](std::size_t i, Reveal& acc) {
      if (i == parts.size()) {
        Reveal r = acc;
        std::sort(r.known.begin(), r.known.end());
        found[r].insert(x);
        return;
      }
      const Part& p = parts[i];
      assignments(*p.labels, p.sizes, all, [&](const std::vector<int>& part) {
        std::size_t mark = acc.known.size();
        for (std::size_t j = 0; j < part.size(); ++j)
          if (!p.relations[part[j]].empty()) acc.known.push_back({(*p.labels)[j], p.relations[part[j]]});
        product(i + 1, acc);
        acc.known.resize(mark);
      });
    };
    product(0, base);
    return true;
  });
  if (!any) throw GameError("enumerate_reveals: observation admits no embedding");
  std::vector<RevealOption> out;
  for (auto& [r, xs] : found) out.push_back({r, std::vector<VertexId>(xs.begin(), xs.end())});
  return out;
}

std::vector<Reveal> enumerate_reveals(const GameState& s, const Game& g, Symmetry symmetry) {
  std::vector<Reveal> out;
  for (auto& o : enumerate_reveal_options(s, g, symmetry)) out.push_back(std::move(o.reveal));
  return out;
}

std::vector<int> interchangeable_classes(const GameState& s) {
  std::map<ClassKey, int> ids;
  std::vector<int> out(s.label_count(), -1);
  for (LabelId l = 0; l < s.label_count(); ++l) {
    if (s.labels[l].visited) continue;
    auto [it, inserted] = ids.emplace(label_key(s, l), static_cast<int>(ids.size()));
    out[l] = it->second;
  }
  return out;
}

namespace {

void put(std::string& out, long long v) {
  // Zig-zag varint.
  unsigned long long u = (static_cast<unsigned long long>(v) << 1) ^ static_cast<unsigned long long>(v >> 63);
  while (u >= 0x80) {
    out.push_back(static_cast<char>((u & 0x7f) | 0x80));
    u >>= 7;
  }
  out.push_back(static_cast<char>(u));
}

void put_link(std::string& out, const Link& l) {
  put(out, l.edge);
  put(out, l.out);
  put(out, l.in);
}

}  // namespace

std::string canonical_key(const GameState& s) {
  // Visited labels are numbered by first visit; unvisited labels enter only as
  // a sorted multiset of their link patterns.
  const int n = s.label_count();
  std::vector<int> pos(n, -1);
  std::vector<LabelId> core;
  for (LabelId l : s.visit_order)
    if (pos[l] == -1) {
      pos[l] = static_cast<int>(core.size());
      core.push_back(l);
    }
  std::string key;
  put(key, static_cast<int>(s.turn));
  put(key, static_cast<int>(s.outcome));
  put(key, s.cost_spent);
  put(key, s.moves > 0);
  put(key, pos[s.current]);
  put(key, static_cast<long long>(core.size()));
  for (LabelId l : core) {
    const auto& lab = s.labels[l];
    put(key, lab.is_target | lab.closed << 1 | (lab.last_visit_stamp < s.discovery_count) << 2);
    std::vector<std::pair<int, Link>> links;
    for (const auto& e : s.adjacency[l])
      if (pos[e.label] != -1) links.push_back({pos[e.label], e.link});
    std::sort(links.begin(), links.end());
    put(key, static_cast<long long>(links.size()));
    for (const auto& [p, link] : links) {
      put(key, p);
      put_link(key, link);
    }
  }
  std::vector<std::tuple<int, int, int>> used;
  for (const auto& u : s.used) {
    int a = pos[u.a], b = pos[u.b];
    if (u.kind == ElementKind::Edge && a > b) std::swap(a, b);
    used.emplace_back(a, b, static_cast<int>(u.kind));
  }
  std::sort(used.begin(), used.end());
  put(key, static_cast<long long>(used.size()));
  for (const auto& [a, b, k] : used) {
    put(key, a);
    put(key, b);
    put(key, k);
  }
  std::vector<std::string> fringe;
  for (LabelId l = 0; l < n; ++l) {
    if (pos[l] != -1) continue;
    std::vector<std::pair<int, Link>> links;
    for (const auto& e : s.adjacency[l]) links.push_back({pos[e.label], e.link});
    std::sort(links.begin(), links.end());
    std::string f;
    put(f, s.labels[l].is_target);
    put(f, static_cast<long long>(links.size()));
    for (const auto& [p, link] : links) {
      put(f, p);
      put_link(f, link);
    }
    fringe.push_back(std::move(f));
  }
  std::sort(fringe.begin(), fringe.end());
  put(key, static_cast<long long>(fringe.size()));
  for (const auto& f : fringe) key += f;
  return key;
}

bool required_covered(const GameState& s, const Game& g) {
  const auto& required = g.map().required;
  if (required.empty()) return true;
  bool covered_everywhere = true;
  for_each_embedding(s, g, [&](const CoreEmbedding& emb) {
    std::set<ElementRef> images;
    for (const auto& u : s.used) {
      VertexId a = emb.image[u.a], b = emb.image[u.b];
      if (u.kind == ElementKind::Edge && a > b) std::swap(a, b);
      images.insert({u.kind, a, b});
    }
    for (const auto& r : required) {
      if (!images.count(r)) {
        covered_everywhere = false;
        return false;
      }
    }
    return true;
  });
  return covered_everywhere;
}

}  // namespace mapgame::knowledge
