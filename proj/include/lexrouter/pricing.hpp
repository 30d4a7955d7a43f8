#pragma once

#include <optional>

#include "lexrouter/objective.hpp"

namespace lexrouter {

// State of a partial path of one vehicle in the pricing search.
struct Label {
  int vehicle = -1;
  int last = -1;              // intervention index, -1 while at the depot
  double reduced_cost = 0.0;  // accumulated, currency units
  int time = 0;               // service-completion time at `last` (ready to travel)
  int start = 0;              // service start at `last`
  std::vector<std::int64_t> consumed;  // per resource interval
  Bitset visited;             // interventions on the path
  Bitset reachable;           // interventions that can still extend the path
  int parent = -1;            // arena index, -1 at the root
  std::int64_t duration = 0;  // minutes of service on the path
  Micro cost = 0;             // personnel + distance cost accumulated so far
  bool closed = false;        // true once extended back to the depot
};

// Number of dominance conditions applied conjunctively. Low levels demand
// less agreement to discard a label, so they prune harder and act as a
// heuristic; level 4 is the full, safe rule set. 0 disables dominance
// entirely (used by enumeration-style verification).
struct DominanceLevel {
  int active = 4;
};

struct PricingConfig {
  enum class Mode {
    improve,  // emit routes with positive reduced cost, stop after max_routes
    closure   // emit every route with reduced cost >= threshold
  };
  Mode mode = Mode::improve;
  int max_routes = 10;     // the per-call route cap in improve mode
  double threshold = 0.0;  // closure mode only
  DominanceLevel level;
  std::size_t label_cap = 1'000'000;

  // Improve mode emits only routes with reduced cost above this. It sits
  // above the LP dual tolerance so columns already in the master are never
  // re-emitted; the closure step's threshold margin recovers anything this
  // skips.
  double emit_tolerance = 1e-6;
};

struct PricedRoute {
  Column column;
  double reduced_cost = 0.0;
};

struct PricingResult {
  std::vector<PricedRoute> routes;
  bool exhaustive = true;  // false when the label cap stopped a closure run
  std::size_t labels_created = 0;
};

// Root label at the vehicle's depot: no time, no consumption, everything
// eligible still reachable, reduced cost seeded with the phase's share of
// the fixed cost and the vehicle's convexity dual.
Label initial_label(int vehicle, const DualValues& duals, const PhaseSpec& phase,
                    const Instance& instance);

// One-step extension to intervention `target` (or back to the depot when
// target < 0). Returns nothing when the move is infeasible. Start times obey
// the half-day rule: a short intervention whose tentative start would
// straddle the lunch instant is pushed to start exactly there.
std::optional<Label> extend(const Label& label, int target, const Instance& instance,
                            const DualValues& duals, const PhaseSpec& phase);

// Interventions in `reachable` that are provably lost after the last
// extension: window closed, cannot finish and return by day end, or over
// capacity. Sound but not complete.
void prune_unreachable(Label& label, const Instance& instance);

// Table of conditions: reduced cost, reachable-set inclusion, time, and
// per-interval consumption, applied conjunctively up to `level.active`.
// True also on exact ties of every active criterion; callers keep the
// earlier-created label.
bool dominates(const Label& a, const Label& b, DominanceLevel level, const Instance& instance);

// Label-setting search for one vehicle. Improve mode returns up to
// max_routes columns with positive reduced cost; closure mode enumerates
// every feasible route with reduced cost >= threshold (within the label
// cap, reported via `exhaustive`).
PricingResult price_vehicle(int vehicle, const DualValues& duals, const PhaseSpec& phase,
                            const PricingConfig& config, const Instance& instance);

// Replays a stop sequence through `extend` with zero duals, producing the
// canonical earliest-start column, or nothing if the sequence is infeasible.
std::optional<Column> build_column(int vehicle, const std::vector<int>& stops,
                                   const Instance& instance);

}  // namespace lexrouter
