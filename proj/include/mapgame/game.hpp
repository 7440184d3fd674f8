#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mapgame/graph.hpp"

namespace mapgame {

using LabelId = int;

enum class Constraint { Path, Trail, Walk };
enum class Objective { ReachTarget, VisitAll, VisitAllAndReturn, VisitAtLeast, TraverseRequired };
enum class BudgetMode { Sum, Max };

struct GameSpec {
  Constraint constraint = Constraint::Path;
  Objective objective = Objective::ReachTarget;
  int min_visits = 0;        // L for VisitAtLeast
  bool closed_tour = false;  // VisitAtLeast: also return to the start
  std::optional<Cost> budget;
  BudgetMode budget_mode = BudgetMode::Sum;
  int map_vertex_count = 0;
  bool reveal_in_arcs = true;

  bool cyclic() const {
    return objective == Objective::VisitAllAndReturn ||
           (objective == Objective::VisitAtLeast && closed_tour);
  }
  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

std::string to_string(Constraint c);
std::string to_string(Objective o);
std::string to_string(BudgetMode m);
Constraint parse_constraint(const std::string& s);
Objective parse_objective(const std::string& s);
BudgetMode parse_budget_mode(const std::string& s);

class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ObservationLabel {
  bool is_start = false;
  bool is_target = false;
  bool visited = false;
  bool closed = false;         // neighborhood disclosed
  int first_reveal_index = 0;  // reveal serial that created the label
  int closed_at = -1;          // reveal serial that disclosed its neighborhood
  int last_visit_stamp = -1;   // discovery count at the latest arrival
  friend bool operator==(const ObservationLabel&, const ObservationLabel&) = default;
};

struct KnownLink {
  LabelId label = 0;
  Link link;  // seen from the owner of the list (or from the current label in a reveal)
  friend auto operator<=>(const KnownLink&, const KnownLink&) = default;
};

struct UsedElement {
  LabelId a = 0, b = 0;  // an edge is stored with a < b
  ElementKind kind = ElementKind::Edge;
  friend auto operator<=>(const UsedElement&, const UsedElement&) = default;
};

enum class Turn { AdversaryToReveal, SearcherToMove, Terminal };
enum class Outcome { Ongoing, SearcherWin, SearcherLoss };
std::string to_string(Turn t);
std::string to_string(Outcome o);

struct GameState {
  std::vector<ObservationLabel> labels;
  std::vector<std::vector<KnownLink>> adjacency;  // per label, sorted by label
  std::vector<UsedElement> used;                  // sorted, unique
  std::vector<LabelId> visit_order;
  LabelId current = 0;
  Cost cost_spent = 0;
  int revealed_count = 1;
  // Number of distinct labels visited so far. The walk rule re-admits a label
  // once this grew since the label's latest arrival.
  int discovery_count = 1;
  int reveal_serial = 0;
  int moves = 0;
  Turn turn = Turn::AdversaryToReveal;
  Outcome outcome = Outcome::Ongoing;

  int label_count() const { return static_cast<int>(labels.size()); }
  Link known(LabelId a, LabelId b) const;
  int visited_count() const { return discovery_count; }
  bool is_used(const UsedElement& e) const;
  friend bool operator==(const GameState&, const GameState&) = default;
};

struct FreshGroup {
  Link link;  // seen from the current label
  bool is_target = false;
  int count = 1;
  friend auto operator<=>(const FreshGroup&, const FreshGroup&) = default;
};

struct Reveal {
  std::vector<KnownLink> known;  // sorted by label
  std::vector<FreshGroup> fresh; // sorted
  int fresh_units() const;
  friend auto operator<=>(const Reveal&, const Reveal&) = default;
};

struct Move {
  LabelId to = 0;
  ElementKind via = ElementKind::Edge;
  friend auto operator<=>(const Move&, const Move&) = default;
};

using Step = std::variant<Move, Reveal>;
using Transcript = std::vector<Step>;

// Rules engine for one map and one variant. Immutable and shareable.
class Game {
 public:
  Game(MixedGraph map, GameSpec spec);

  const MixedGraph& map() const { return map_; }
  const GameSpec& spec() const { return spec_; }
  const MapIndex& index() const { return index_; }
  int turn_bound() const { return turn_bound_; }
  // The part of a link that a reveal at its first vertex discloses.
  Link visible(const Link& l) const { return spec_.reveal_in_arcs ? l : l.without_in(); }
  // Number of neighbors a reveal at v discloses.
  int visible_degree(VertexId v) const { return visible_degree_[v]; }

  GameState new_game() const;
  std::vector<Move> searcher_moves(const GameState& s) const;
  GameState apply_move(const GameState& s, const Move& m) const;
  // Validates the reveal against the knowledge module before applying it.
  GameState apply_reveal(const GameState& s, const Reveal& r) const;
  Outcome status(const GameState& s) const;

  // Unchecked transitions for search code that produced its own legal input.
  GameState advance(const GameState& s, const Move& m) const;
  GameState advance(const GameState& s, const Reveal& r) const;

  GameState replay(const Transcript& t) const;

 private:
  bool objective_met(const GameState& s) const;
  bool legal_now(const GameState& s, LabelId to, const Link& link, ElementKind via) const;
  void settle(GameState& s) const;

  MixedGraph map_;
  GameSpec spec_;
  MapIndex index_;
  std::vector<int> visible_degree_;
  int turn_bound_ = 0;
};

// Violations of the spec against the map; empty when consistent.
std::vector<std::string> check_spec(const MixedGraph& map, const GameSpec& spec);

GameState new_game(const Game& game);

}  // namespace mapgame
