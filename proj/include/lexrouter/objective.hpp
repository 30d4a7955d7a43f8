#pragma once

#include <vector>

#include "lexrouter/model.hpp"

namespace lexrouter {

// The three single-objective problems the solver runs. `weighted` folds both
// criteria into one maximization via the hierarchy weight; `duration` and
// `cost` are the two stages of the sequential scheme. The cost stage is
// posed as maximize(-cost) so "positive reduced cost" means the same thing
// in every phase.
enum class Phase { weighted, duration, cost };

const char* to_string(Phase phase);

struct PhaseSpec {
  Phase phase = Phase::duration;
  std::int64_t hierarchy_weight = 0;  // weighted phase only, currency units
  std::int64_t min_duration = 0;      // cost phase only: f1 floor from the duration stage

  // Objective value of a schedule with totals (f1, f2), in this phase's
  // maximization convention.
  double objective(std::int64_t total_duration, Micro total_cost) const;

  // Exact gcd of achievable objective differences, for safe MILP pruning.
  double granularity(const Instance& instance) const;

  bool counts_cost() const { return phase != Phase::duration; }
};

// Duals of the restricted master, in currency units. `min_duration` is the
// magnitude of the dual on the duration-floor row (cost phase only), stored
// non-negative.
struct DualValues {
  std::vector<double> coverage;  // per intervention
  std::vector<double> vehicle;   // per vehicle
  double min_duration = 0.0;
};

DualValues zero_duals(const Instance& instance);

inline double to_currency(Micro micro) {
  return static_cast<double>(micro) / static_cast<double>(kMicroScale);
}

}  // namespace lexrouter
