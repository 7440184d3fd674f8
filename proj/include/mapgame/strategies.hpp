#pragma once

#include <memory>
#include <optional>
#include <string>

#include "mapgame/qbf.hpp"
#include "mapgame/solver.hpp"

namespace mapgame::strategies {

using solver::AdversaryPolicy;
using solver::SearcherStrategy;

class StrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Depth-first exploration over labels, backtracking along visited labels.
std::unique_ptr<SearcherStrategy> dfs_walk_strategy();
// Always the first legal move.
std::unique_ptr<SearcherStrategy> first_move_strategy();
// Gadget walkthroughs for the s-t path and Hamiltonian path constructions.
// Both read map roles from annotations and never the hidden embedding.
std::unique_ptr<SearcherStrategy> stpath_proof_strategy(qbf::SkolemPolicy policy);
std::unique_ptr<SearcherStrategy> ham_proof_strategy(qbf::SkolemPolicy policy);

// Prefers reveals that can place the searcher on a degree-1 vertex.
std::unique_ptr<AdversaryPolicy> sink_seeking_policy();
std::unique_ptr<AdversaryPolicy> first_consistent_policy();

const std::vector<std::string>& strategy_names();
const std::vector<std::string>& policy_names();

// Proof strategies need the formula to derive their existential choices.
std::unique_ptr<SearcherStrategy> make_strategy(const std::string& name,
                                                const std::optional<qbf::Formula>& formula = std::nullopt);
// Non-optimal policies only; optimal ones come from solver::extract_adversary_policy.
std::unique_ptr<AdversaryPolicy> make_policy(const std::string& name);

}  // namespace mapgame::strategies
