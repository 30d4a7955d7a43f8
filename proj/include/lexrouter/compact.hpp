#pragma once

#include "lexrouter/lp.hpp"
#include "lexrouter/objective.hpp"

namespace lexrouter {

// Arc-variable MILP over per-vehicle entity sets (own depot + eligible
// interventions). Kept alongside the solver outcome for decoding.
struct CompactModel {
  LinearModel model;
  PhaseSpec phase;
  // entities[v]: local entity list, entry 0 is the depot (-1), then eligible
  // intervention indices. arc_var[v] is a dense local-index matrix of
  // variable ids (-1 on the diagonal).
  std::vector<std::vector<int>> entities;
  std::vector<std::vector<int>> arc_var;
  std::vector<int> u_var;  // start time per intervention
  std::vector<int> z_var;  // afternoon indicator per short intervention, -1 for long
};

// Builds coverage, flow, depot-departure, time-chaining, first-arc, day-end,
// half-day and capacity rows, with the objective picked by the phase; the
// cost phase adds the duration-floor row. Weighted mode requires
// hierarchy_weight, the cost phase min_duration.
CompactModel build_compact(const Instance& instance, const PhaseSpec& phase);

// Reconstructs routes by following selected arcs from each depot; start
// times are re-derived as canonical earliest starts and the schedule is
// validated. Throws ModelError on fractional arcs (beyond 1e-6), subtours,
// or an undecodable outcome.
LexSolution decode_compact(const SolveOutcome& outcome, const CompactModel& compact,
                           const Instance& instance);

}  // namespace lexrouter
