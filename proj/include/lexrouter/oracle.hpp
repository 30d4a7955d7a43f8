#pragma once

#include "lexrouter/model.hpp"

namespace lexrouter {

class BudgetError : public ModelError {
 public:
  using ModelError::ModelError;
};

struct EnumerationBudget {
  int max_interventions = 8;
  int max_vehicles = 3;
  std::size_t max_routes_per_vehicle = 200'000;
};

// Depth-first enumeration of every elementary feasible route of one vehicle,
// through the same extension rules as the pricing search (dominance off,
// zero duals). Start times are canonical earliest starts. Throws BudgetError
// beyond the budget.
std::vector<Column> enumerate_routes(int vehicle, const Instance& instance,
                                     const EnumerationBudget& budget);

// Ground-truth lexicographic optimum: over all assignments of at most one
// route per vehicle with pairwise-disjoint coverage, maximizes (f1, -f2);
// ties fall to the smallest route tuple. Self-checks exchange stability.
LexSolution brute_force_lex_optimum(const Instance& instance, const EnumerationBudget& budget);

}  // namespace lexrouter
