#pragma once

#include <chrono>
#include <list>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "mapgame/game.hpp"
#include "mapgame/knowledge.hpp"

namespace mapgame::solver {

enum class Value { SearcherWin, AdversaryWin, ResourceLimit };
std::string to_string(Value v);

struct Limits {
  long long max_states = 10'000'000;
  int max_depth = -1;            // moves; -1 means the variant turn bound
  double max_seconds = 0;        // 0 means unlimited
  std::size_t memo_capacity = 2'000'000;
  bool memoize = true;
  bool prune = true;             // cut nodes where some embedding is offline-infeasible
};

class Solver;

struct SolveResult {
  Value value = Value::ResourceLimit;
  long long states = 0;
  double seconds = 0;
  std::optional<Transcript> principal;
  std::shared_ptr<Solver> solver;  // retained for policy extraction
};

class SearcherStrategy {
 public:
  virtual ~SearcherStrategy() = default;
  virtual std::string name() const = 0;
  virtual Move choose(const Game& g, const GameState& s) = 0;
  virtual std::unique_ptr<SearcherStrategy> clone() const = 0;
};

class AdversaryPolicy {
 public:
  virtual ~AdversaryPolicy() = default;
  virtual std::string name() const = 0;
  virtual Reveal choose(const Game& g, const GameState& s) = 0;
};

// AND-OR search over observation states, memoized on canonical keys.
class Solver {
 public:
  Solver(const Game& game, Limits limits);

  Value value(const GameState& s);
  // A move whose successor is searcher-win, if any.
  std::optional<Move> winning_move(const GameState& s);
  // A reveal whose successor is adversary-win, if any.
  std::optional<Reveal> refuting_reveal(const GameState& s);
  Transcript principal(const GameState& from);

  long long states() const { return states_; }
  bool exhausted() const { return exhausted_; }
  const Game& game() const { return game_; }
  // Some embedding makes the objective unreachable even with full knowledge.
  bool offline_infeasible(const GameState& s) const;
  // Candidate searcher moves with interchangeable destinations merged.
  std::vector<Move> distinct_moves(const GameState& s) const;
  std::vector<Reveal> ordered_reveals(const GameState& s) const;

 private:
  Value search(const GameState& s);
  std::string key_of(const GameState& s) const;
  bool over_budget();
  void remember(const std::string& key, Value v);

  const Game& game_;
  Limits limits_;
  int depth_limit_;
  long long states_ = 0;
  bool exhausted_ = false;
  std::chrono::steady_clock::time_point started_;
  std::list<std::string> lru_;
  struct Entry {
    Value value;
    std::list<std::string>::iterator pos;
  };
  std::unordered_map<std::string, Entry> memo_;
};

SolveResult solve(const Game& game, const Limits& limits = {});

std::unique_ptr<SearcherStrategy> extract_searcher_strategy(const SolveResult& r);
std::unique_ptr<AdversaryPolicy> extract_adversary_policy(const SolveResult& r);

enum class Verdict { Holds, Fails, ResourceLimit };
std::string to_string(Verdict v);

struct VerifyResult {
  Verdict verdict = Verdict::ResourceLimit;
  long long states = 0;
  double seconds = 0;
  std::optional<Transcript> counter;  // a branch the fixed side loses
  std::string message;
};

struct VerifyOptions {
  long long max_states = 10'000'000;
  double max_seconds = 0;
  // Merge reveals (resp. searcher moves) that differ only by interchangeable
  // unvisited labels.
  bool quotient = true;
};

VerifyResult verify_searcher_strategy(const Game& game, const SearcherStrategy& strategy,
                                      const VerifyOptions& options = {});
VerifyResult verify_adversary_policy(const Game& game, AdversaryPolicy& policy,
                                     const VerifyOptions& options = {});

}  // namespace mapgame::solver
