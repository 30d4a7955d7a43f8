#pragma once

#include <optional>
#include <unordered_set>

#include "lexrouter/lp.hpp"
#include "lexrouter/objective.hpp"

namespace lexrouter {

// Columns keyed by (vehicle, stop sequence); duplicates are rejected. Start
// times are canonical (earliest feasible), so equal sequences are equal
// columns.
class ColumnPool {
 public:
  // Returns false when the column was already present.
  bool add(Column column);

  const std::vector<Column>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }

 private:
  std::vector<Column> columns_;
  std::unordered_set<std::size_t> seen_;
};

struct MasterModel {
  LinearModel model;
  std::vector<int> coverage_row;  // per intervention
  std::vector<int> vehicle_row;   // per vehicle
  int duration_row = -1;          // cost phase only
};

// LP relaxation of the restricted set-packing master: one [0,1] variable per
// column, per-intervention coverage and per-vehicle convexity rows, plus the
// duration floor in the cost phase. An empty pool is legal.
MasterModel build_master_lp(const ColumnPool& pool, const PhaseSpec& phase,
                            const Instance& instance);

struct MasterLpSolution {
  SolveStatus status = SolveStatus::error;
  double objective = 0.0;  // u
  DualValues duals;
  std::vector<double> lambda;
};

MasterLpSolution solve_master_lp(const ColumnPool& pool, const PhaseSpec& phase,
                                 const Instance& instance);

// Reduced cost of a column under master duals; "worth generating" means > 0
// in every phase.
double reduced_cost(const Column& column, const DualValues& duals, const PhaseSpec& phase,
                    const Instance& instance);

struct IntegerRestrictedResult {
  SolveStatus status = SolveStatus::error;
  LexSolution solution;
  double objective = 0.0;  // the phase objective of the decoded schedule
};

// Binary restricted master. The decoded schedule is validated before it is
// returned; `warm` seeds the incumbent when it is made of pool columns.
IntegerRestrictedResult solve_integer_restricted(const ColumnPool& pool, const PhaseSpec& phase,
                                                 double time_limit_seconds,
                                                 const Instance& instance,
                                                 const LexSolution* warm = nullptr);

struct MasterState {
  Phase phase = Phase::duration;
  std::optional<double> lp_value;       // u
  std::optional<double> integer_value;  // l
};

// l - u: the closure step must enumerate every feasible route with reduced
// cost at or above this. Throws when either value is missing.
double closure_threshold(const MasterState& state);

}  // namespace lexrouter
