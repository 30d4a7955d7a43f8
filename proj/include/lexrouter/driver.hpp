#pragma once

#include "lexrouter/master.hpp"
#include "lexrouter/pricing.hpp"

namespace lexrouter {

struct RunConfig {
  enum class Mode { weighted, sequential };
  enum class Formulation { cg, compact };
  enum class InitialPool { singletons, none };

  Mode mode = Mode::weighted;
  Formulation formulation = Formulation::cg;
  double time_limit = 300.0;
  int eta = 10;             // route cap per pricing call
  bool relaxation = true;   // gradual activation of dominance conditions
  InitialPool initial_pool = InitialPool::singletons;
  std::uint64_t seed = 0;   // recorded in outputs; the solve itself is deterministic
  std::size_t label_cap = 1'000'000;
};

struct PhaseStats {
  std::string phase;
  int iterations = 0;        // master solves in the generation loop
  int routes_generated = 0;  // pool growth, improvement and closure combined
  std::vector<double> lp_trajectory;
  std::vector<int> level_trajectory;
  double lp_value = 0.0;                 // final u
  double pre_closure_integer_value = 0;  // l before the closure step
  double integer_value = 0.0;            // final l
  int closure_routes = 0;
  bool exact = false;  // loop converged, closure exhaustive, solves optimal
  double wall_seconds = 0.0;
};

struct RunStats {
  std::vector<PhaseStats> phases;
  double wall_seconds = 0.0;
  bool exact = false;
};

struct CgPhaseOutcome {
  MasterState state;
  LexSolution solution;
  PhaseStats stats;
};

// One full generation run for one phase: the loop of master solves and
// pricing (with dominance relaxation when enabled), the integer restricted
// solve, the threshold closure, and the final integer solve. The pool is
// shared with the caller and keeps every generated column. `warm` feeds the
// integer solves an initial incumbent.
CgPhaseOutcome solve_cg_phase(const Instance& instance, const PhaseSpec& phase, ColumnPool& pool,
                              const RunConfig& config, double budget_seconds,
                              const LexSolution* warm = nullptr);

// Single-run pipeline over the combined objective.
std::pair<LexSolution, RunStats> solve_weighted(const Instance& instance, const RunConfig& config);

// Two-stage pipeline: maximize duration, then minimize cost at no less than
// the attained duration. The second stage inherits the first stage's pool.
std::pair<LexSolution, RunStats> solve_sequential(const Instance& instance,
                                                  const RunConfig& config);

// Dispatch on config.mode.
std::pair<LexSolution, RunStats> solve(const Instance& instance, const RunConfig& config);

}  // namespace lexrouter
