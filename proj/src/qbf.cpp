#include "mapgame/qbf.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace mapgame::qbf {

int Formula::prefix_position(int var) const {
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (prefix[i].var == var) return static_cast<int>(i);
  return -1;
}

std::optional<Quantifier> Formula::quantifier_of(int var) const {
  int p = prefix_position(var);
  if (p < 0) return std::nullopt;
  return prefix[p].quantifier;
}

std::string Formula::to_qdimacs() const {
  std::ostringstream out;
  out << "p cnf " << variable_count << ' ' << clauses.size() << '\n';
  std::size_t i = 0;
  while (i < prefix.size()) {
    Quantifier q = prefix[i].quantifier;
    out << (q == Quantifier::Exists ? 'e' : 'a');
    while (i < prefix.size() && prefix[i].quantifier == q) out << ' ' << prefix[i++].var;
    out << " 0\n";
  }
  for (const auto& c : clauses) {
    for (const auto& l : c) out << (l.negated ? -l.var : l.var) << ' ';
    out << "0\n";
  }
  return out.str();
}

std::string Formula::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_qdimacs()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

int to_int(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw QbfError("line " + std::to_string(line_no) + ": not an integer: '" + s + "'");
  }
}

}  // namespace

Formula parse_qdimacs(std::string_view text) {
  Formula f;
  bool header = false;
  std::size_t declared_clauses = 0;
  bool clauses_started = false;
  std::set<int> quantified;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto tok = tokens(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "p") {
      if (header) throw QbfError("line " + std::to_string(line_no) + ": duplicate header");
      if (tok.size() != 4 || tok[1] != "cnf")
        throw QbfError("line " + std::to_string(line_no) + ": malformed header");
      int v = to_int(tok[2], line_no), c = to_int(tok[3], line_no);
      if (v < 0 || c < 0) throw QbfError("malformed header: negative count");
      f.variable_count = v;
      declared_clauses = static_cast<std::size_t>(c);
      header = true;
      continue;
    }
    if (!header) throw QbfError("line " + std::to_string(line_no) + ": missing header");
    if (tok[0] == "e" || tok[0] == "a") {
      if (clauses_started)
        throw QbfError("line " + std::to_string(line_no) + ": quantifier after clauses");
      if (tok.back() != "0")
        throw QbfError("line " + std::to_string(line_no) + ": quantifier line not 0-terminated");
      Quantifier q = tok[0] == "e" ? Quantifier::Exists : Quantifier::Forall;
      for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
        int v = to_int(tok[i], line_no);
        if (v < 1 || v > f.variable_count)
          throw QbfError("line " + std::to_string(line_no) + ": variable out of range: " + tok[i]);
        if (!quantified.insert(v).second)
          throw QbfError("duplicate quantification of variable " + std::to_string(v));
        f.prefix.push_back({q, v});
      }
      continue;
    }
    clauses_started = true;
    if (tok.back() != "0")
      throw QbfError("line " + std::to_string(line_no) + ": clause not 0-terminated");
    Clause clause;
    for (std::size_t i = 0; i + 1 < tok.size(); ++i) {
      int lit = to_int(tok[i], line_no);
      if (lit == 0) throw QbfError("line " + std::to_string(line_no) + ": stray 0 inside clause");
      int v = std::abs(lit);
      if (v > f.variable_count)
        throw QbfError("line " + std::to_string(line_no) + ": variable out of range");
      if (!quantified.count(v))
        throw QbfError("variable " + std::to_string(v) + " referenced but not quantified");
      clause.push_back({v, lit < 0});
    }
    if (clause.empty()) throw QbfError("line " + std::to_string(line_no) + ": empty clause");
    f.clauses.push_back(std::move(clause));
  }
  if (!header) throw QbfError("missing header");
  if (f.clauses.size() != declared_clauses)
    throw QbfError("malformed header: declared " + std::to_string(declared_clauses) +
                   " clauses, found " + std::to_string(f.clauses.size()));
  // Unquantified and unused variables are free; bind them existentially outermost.
  std::vector<QuantifiedVar> free_vars;
  for (int v = 1; v <= f.variable_count; ++v)
    if (!quantified.count(v)) free_vars.push_back({Quantifier::Exists, v});
  f.prefix.insert(f.prefix.begin(), free_vars.begin(), free_vars.end());
  return f;
}

void check_formula(const Formula& f) {
  std::set<int> seen;
  for (const auto& q : f.prefix) {
    if (q.var < 1 || q.var > f.variable_count)
      throw QbfError("prefix variable out of range: " + std::to_string(q.var));
    if (!seen.insert(q.var).second)
      throw QbfError("duplicate quantification of variable " + std::to_string(q.var));
  }
  if (static_cast<int>(seen.size()) != f.variable_count)
    throw QbfError("variable ids must be 1..variable-count, all quantified");
  for (const auto& c : f.clauses) {
    if (c.empty()) throw QbfError("empty clause");
    for (const auto& l : c)
      if (!seen.count(l.var))
        throw QbfError("variable " + std::to_string(l.var) + " referenced but not quantified");
  }
}

bool is_normalized(const Formula& f) {
  try {
    check_formula(f);
  } catch (const QbfError&) {
    return false;
  }
  for (std::size_t i = 0; i < f.prefix.size(); ++i) {
    Quantifier expected = i % 2 == 0 ? Quantifier::Exists : Quantifier::Forall;
    if (f.prefix[i].quantifier != expected) return false;
  }
  for (const auto& c : f.clauses)
    if (c.size() != 3) return false;
  return true;
}

Formula normalize(const Formula& f) {
  check_formula(f);
  Formula out;
  int next_var = f.variable_count;
  std::vector<int> split_vars;
  for (const auto& c : f.clauses) {
    if (c.size() == 1) {
      out.clauses.push_back({c[0], c[0], c[0]});
    } else if (c.size() == 2) {
      out.clauses.push_back({c[0], c[1], c[1]});
    } else if (c.size() == 3) {
      out.clauses.push_back(c);
    } else {
      // (l1 l2 y1) (-y1 l3 y2) ... (-y_{k-3} l_{k-1} l_k)
      int y = ++next_var;
      split_vars.push_back(y);
      out.clauses.push_back({c[0], c[1], {y, false}});
      for (std::size_t i = 2; i + 2 < c.size(); ++i) {
        int y2 = ++next_var;
        split_vars.push_back(y2);
        out.clauses.push_back({{y, true}, c[i], {y2, false}});
        y = y2;
      }
      out.clauses.push_back({{y, true}, c[c.size() - 2], c.back()});
    }
  }
  std::vector<QuantifiedVar> order = f.prefix;
  for (int y : split_vars) order.push_back({Quantifier::Exists, y});
  Quantifier expected = Quantifier::Exists;
  for (const auto& q : order) {
    if (q.quantifier != expected) out.prefix.push_back({expected, ++next_var});
    out.prefix.push_back(q);
    expected = q.quantifier == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
  }
  if (!out.prefix.empty() && out.prefix.back().quantifier == Quantifier::Exists)
    out.prefix.push_back({Quantifier::Forall, ++next_var});
  out.variable_count = next_var;
  return out;
}

SkolemPolicy::SkolemPolicy(const Formula& f) {
  std::vector<int> universals;
  for (const auto& q : f.prefix) {
    if (q.quantifier == Quantifier::Forall) {
      universals.push_back(q.var);
    } else {
      if (universals.size() > 30) throw ResourceLimit("too many universal variables for a policy table");
      earlier_[q.var] = universals;
      tables_[q.var].assign(std::size_t{1} << universals.size(), -1);
    }
  }
}

const std::vector<int>& SkolemPolicy::earlier_universals(int var) const {
  auto it = earlier_.find(var);
  if (it == earlier_.end()) throw QbfError("policy has no entry for variable " + std::to_string(var));
  return it->second;
}

void SkolemPolicy::set(int var, std::uint64_t mask, bool value) {
  tables_.at(var).at(mask) = value ? 1 : 0;
}

bool SkolemPolicy::choose(int var, const std::map<int, bool>& universal_values) const {
  const auto& earlier = earlier_universals(var);
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < earlier.size(); ++i) {
    auto it = universal_values.find(earlier[i]);
    if (it == universal_values.end())
      throw QbfError("policy lookup for variable " + std::to_string(var) +
                     " lacks universal " + std::to_string(earlier[i]));
    if (it->second) mask |= std::uint64_t{1} << i;
  }
  std::int8_t v = tables_.at(var).at(mask);
  if (v < 0) throw QbfError("policy entry undefined");
  return v == 1;
}

bool SkolemPolicy::total() const {
  for (const auto& [var, table] : tables_)
    for (auto v : table)
      if (v < 0) return false;
  return true;
}

namespace {

class Evaluator {
 public:
  Evaluator(const Formula& f, SkolemPolicy* policy)
      : f_(f), value_(f.variable_count + 1, -1), policy_(policy) {}

  bool run(std::size_t pos) {
    int m = matrix();
    if (m == 1 && policy_) fill_unreached(pos);
    if (m >= 0) return m == 1;
    if (pos == f_.prefix.size()) return false;
    const auto& q = f_.prefix[pos];
    if (q.quantifier == Quantifier::Forall) {
      for (int b : {1, 0}) {
        value_[q.var] = static_cast<std::int8_t>(b);
        bool ok = run(pos + 1);
        value_[q.var] = -1;
        if (!ok) return false;
      }
      return true;
    }
    for (int b : {1, 0}) {
      value_[q.var] = static_cast<std::int8_t>(b);
      bool ok = run(pos + 1);
      if (ok && policy_) policy_->set(q.var, mask_for(q.var), b == 1);
      value_[q.var] = -1;
      if (ok) return true;
    }
    return false;
  }

 private:
  // 1 satisfied, 0 falsified, -1 undecided.
  int matrix() const {
    bool all = true;
    for (const auto& c : f_.clauses) {
      bool sat = false, open = false;
      for (const auto& l : c) {
        int v = value_[l.var];
        if (v < 0) {
          open = true;
        } else if ((v == 1) != l.negated) {
          sat = true;
          break;
        }
      }
      if (sat) continue;
      if (!open) return 0;
      all = false;
    }
    return all ? 1 : -1;
  }

  // Once the matrix is satisfied the remaining existentials are unconstrained;
  // their entries under the current assignment are set to true.
  void fill_unreached(std::size_t from) {
    for (std::size_t p = from; p < f_.prefix.size(); ++p) {
      if (f_.prefix[p].quantifier != Quantifier::Exists) continue;
      int var = f_.prefix[p].var;
      const auto& earlier = policy_->earlier_universals(var);
      // Enumerate completions of the unassigned earlier universals.
      std::vector<std::size_t> free_bits;
      std::uint64_t base = 0;
      for (std::size_t i = 0; i < earlier.size(); ++i) {
        int v = value_[earlier[i]];
        if (v < 0) free_bits.push_back(i);
        else if (v == 1) base |= std::uint64_t{1} << i;
      }
      if (free_bits.size() > 20) throw ResourceLimit("policy table too large");
      for (std::uint64_t k = 0; k < (std::uint64_t{1} << free_bits.size()); ++k) {
        std::uint64_t mask = base;
        for (std::size_t b = 0; b < free_bits.size(); ++b)
          if (k >> b & 1) mask |= std::uint64_t{1} << free_bits[b];
        policy_->set(var, mask, true);
      }
    }
  }

  std::uint64_t mask_for(int var) const {
    const auto& earlier = policy_->earlier_universals(var);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < earlier.size(); ++i)
      if (value_[earlier[i]] == 1) mask |= std::uint64_t{1} << i;
    return mask;
  }

  const Formula& f_;
  std::vector<std::int8_t> value_;
  SkolemPolicy* policy_;
};

}  // namespace

Evaluation evaluate(const Formula& f, int max_variables) {
  check_formula(f);
  if (f.variable_count > max_variables)
    throw ResourceLimit("formula has " + std::to_string(f.variable_count) +
                        " variables; limit is " + std::to_string(max_variables));
  SkolemPolicy policy(f);
  Evaluator ev(f, &policy);
  Evaluation result;
  result.truth = ev.run(0);
  if (result.truth) result.policy = std::move(policy);
  return result;
}

}  // namespace mapgame::qbf
