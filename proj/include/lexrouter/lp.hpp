#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace lexrouter {

inline constexpr double kLpInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kLpTolerance = 1e-6;

enum class RowSense { le, ge, eq };
enum class ObjSense { maximize, minimize };

struct LpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kLpInfinity;
  bool integer = false;
};

struct LpRow {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

struct LinearModel {
  ObjSense sense = ObjSense::maximize;
  std::vector<LpVariable> vars;
  std::vector<double> objective;
  std::vector<LpRow> rows;

  // Optional primal hint; solve_milp uses it as the initial incumbent when
  // it checks out feasible. Unlisted variables default to 0 clamped into
  // their bounds.
  std::vector<std::pair<int, double>> warm_start;

  // Smallest achievable nonzero difference between objective values of
  // feasible points, when the caller knows it (0 = unknown). Lets the MILP
  // search prune at equal-objective nodes without risking a wrong prune.
  double objective_granularity = 0.0;

  int add_variable(std::string name, double lower, double upper, bool integer, double obj);
  int add_row(std::string name, RowSense sense, double rhs);
  void add_coeff(int row, int var, double coeff);

  bool has_integer_vars() const;

  // Enforces structural invariants (declared variable references, finite
  // rhs); throws std::invalid_argument on breach.
  void check() const;
};

enum class SolveStatus { optimal, feasible_limit, infeasible, unbounded, error };
const char* to_string(SolveStatus status);

struct SolveOutcome {
  SolveStatus status = SolveStatus::error;
  std::vector<double> primal;
  double objective = 0.0;

  // Row duals and variable reduced costs, present only when the model has no
  // integer variables and the status is optimal. Convention for a
  // maximization: duals of <= rows are >= 0, duals of >= rows are <= 0, and
  // objective = sum(dual*rhs) + sum(reduced_cost*primal).
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  bool has_duals = false;

  double bound = 0.0;  // best proven bound; equals objective at optimal
  double wall_seconds = 0.0;
  std::string message;
};

// Simplex solve of a pure LP. Integer flags present -> status error.
SolveOutcome solve_lp(const LinearModel& model);

// LP-based branch and bound. time_limit <= 0 means "no work budget": the
// call returns the warm-start incumbent (feasible-limit) or an error, never
// a silent optimal.
SolveOutcome solve_milp(const LinearModel& model, double time_limit_seconds);

// Fixed-format LP text export for offline debugging.
void write_lp_text(const LinearModel& model, std::ostream& out);

}  // namespace lexrouter
