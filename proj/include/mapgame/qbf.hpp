#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mapgame::qbf {

enum class Quantifier { Exists, Forall };

struct Literal {
  int var = 0;
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct QuantifiedVar {
  Quantifier quantifier = Quantifier::Exists;
  int var = 0;
  friend bool operator==(const QuantifiedVar&, const QuantifiedVar&) = default;
};

using Clause = std::vector<Literal>;

struct Formula {
  std::vector<QuantifiedVar> prefix;
  std::vector<Clause> clauses;
  int variable_count = 0;

  // Position of a variable in the prefix, or -1.
  int prefix_position(int var) const;
  std::optional<Quantifier> quantifier_of(int var) const;
  std::string to_qdimacs() const;
  // Stable hex digest of the QDIMACS text.
  std::string digest() const;

  friend bool operator==(const Formula&, const Formula&) = default;
};

class QbfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceLimit : public QbfError {
 public:
  using QbfError::QbfError;
};

Formula parse_qdimacs(std::string_view text);

// Throws QbfError on the first violation.
void check_formula(const Formula& f);

bool is_normalized(const Formula& f);
Formula normalize(const Formula& f);

// Winning existential choices keyed by the bits of all earlier universal
// variables (bit i = value of the i-th earlier universal in prefix order).
class SkolemPolicy {
 public:
  SkolemPolicy() = default;
  explicit SkolemPolicy(const Formula& f);

  bool choose(int var, const std::map<int, bool>& universal_values) const;
  void set(int var, std::uint64_t mask, bool value);
  const std::vector<int>& earlier_universals(int var) const;
  bool defines(int var) const { return tables_.count(var) != 0; }
  bool total() const;

 private:
  std::map<int, std::vector<int>> earlier_;
  std::map<int, std::vector<std::int8_t>> tables_;
};

struct Evaluation {
  bool truth = false;
  std::optional<SkolemPolicy> policy;
};

Evaluation evaluate(const Formula& f, int max_variables = 25);

}  // namespace mapgame::qbf
