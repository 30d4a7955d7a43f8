#pragma once

#include <vector>

#include "lexrouter/lp.hpp"

namespace lexrouter::detail {

struct LpResult {
  SolveStatus status = SolveStatus::error;
  std::vector<double> primal;       // structural variables
  double objective = 0.0;           // in the model's sense
  std::vector<double> duals;        // per row
  std::vector<double> reduced;      // per structural variable
  std::string message;
};

// Two-phase bounded-variable primal simplex. Bound overrides, when given,
// replace the variable bounds (used by branch and bound).
LpResult simplex_solve(const LinearModel& model,
                       const std::vector<double>* lower_override = nullptr,
                       const std::vector<double>* upper_override = nullptr);

}  // namespace lexrouter::detail
