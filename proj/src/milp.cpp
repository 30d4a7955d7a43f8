#include <algorithm>
#include <chrono>
#include <cmath>

#include "simplex_internal.hpp"

namespace lexrouter {

namespace {

using Clock = std::chrono::steady_clock;

constexpr long kNodeLimit = 2'000'000;

struct Search {
  const LinearModel& model;
  std::vector<double> lo, hi;
  std::vector<int> int_vars;
  Clock::time_point deadline;
  bool has_deadline = false;

  bool maximize;
  double prune_eps;

  bool have_incumbent = false;
  std::vector<double> incumbent;
  double incumbent_obj = 0.0;  // user sense

  double root_bound = 0.0;  // user sense, valid once root solved
  bool root_solved = false;

  long nodes = 0;
  bool truncated = false;
  bool unbounded = false;
  std::string error;

  explicit Search(const LinearModel& m) : model(m), maximize(m.sense == ObjSense::maximize) {
    lo.reserve(m.vars.size());
    hi.reserve(m.vars.size());
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
      lo.push_back(m.vars[j].lower);
      hi.push_back(m.vars[j].upper);
      if (m.vars[j].integer) int_vars.push_back(static_cast<int>(j));
    }
    prune_eps = m.objective_granularity > 0.0 ? 0.45 * m.objective_granularity : 0.0;
  }

  double score(double user_obj) const { return maximize ? user_obj : -user_obj; }

  bool out_of_budget() {
    if (has_deadline && Clock::now() >= deadline) {
      truncated = true;
      return true;
    }
    if (nodes >= kNodeLimit) {
      truncated = true;
      return true;
    }
    return false;
  }

  bool better(double user_obj) const {
    if (!have_incumbent) return true;
    return score(user_obj) > score(incumbent_obj) + 1e-12 * (1.0 + std::abs(incumbent_obj));
  }

  bool prunable(double user_bound) const {
    if (!have_incumbent) return false;
    const double eps =
        prune_eps > 0.0 ? prune_eps : 1e-9 * (1.0 + std::abs(incumbent_obj));
    return score(user_bound) <= score(incumbent_obj) + eps;
  }

  void offer(const std::vector<double>& primal, double user_obj) {
    if (!better(user_obj)) return;
    have_incumbent = true;
    incumbent = primal;
    incumbent_obj = user_obj;
    for (int j : int_vars) incumbent[j] = std::round(incumbent[j]);
  }

  // Returns false when the search was aborted by an internal solver error.
  bool explore(int depth) {
    if (out_of_budget()) return true;
    ++nodes;

    const detail::LpResult lp = detail::simplex_solve(model, &lo, &hi);
    if (lp.status == SolveStatus::infeasible) return true;
    if (lp.status == SolveStatus::unbounded) {
      unbounded = true;
      error = "LP relaxation unbounded";
      return false;
    }
    if (lp.status != SolveStatus::optimal) {
      error = lp.message.empty() ? "LP relaxation failed" : lp.message;
      return false;
    }
    if (depth == 0) {
      root_bound = lp.objective;
      root_solved = true;
    }
    if (prunable(lp.objective)) return true;

    int branch_var = -1;
    double branch_val = 0.0;
    double most_fractional = kLpTolerance;
    for (int j : int_vars) {
      const double v = lp.primal[j];
      const double frac = std::abs(v - std::round(v));
      if (frac > most_fractional) {
        most_fractional = frac;
        branch_var = j;
        branch_val = v;
      }
    }

    if (branch_var < 0) {
      offer(lp.primal, lp.objective);
      return true;
    }

    const double floor_val = std::floor(branch_val + kLpTolerance);
    const double saved_lo = lo[branch_var];
    const double saved_hi = hi[branch_var];
    const bool up_first = branch_val - floor_val >= 0.5;

    for (int pass = 0; pass < 2; ++pass) {
      const bool up = (pass == 0) == up_first;
      if (up) {
        lo[branch_var] = floor_val + 1.0;
        hi[branch_var] = saved_hi;
      } else {
        lo[branch_var] = saved_lo;
        hi[branch_var] = std::floor(floor_val);
      }
      if (lo[branch_var] <= hi[branch_var] + kLpTolerance) {
        if (!explore(depth + 1)) {
          lo[branch_var] = saved_lo;
          hi[branch_var] = saved_hi;
          return false;
        }
      }
      lo[branch_var] = saved_lo;
      hi[branch_var] = saved_hi;
      if (out_of_budget()) return true;
    }
    return true;
  }
};

bool warm_start_feasible(const LinearModel& model, std::vector<double>& x) {
  x.assign(model.vars.size(), 0.0);
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    x[j] = std::clamp(0.0, model.vars[j].lower, model.vars[j].upper);
  }
  for (const auto& [var, value] : model.warm_start) x[var] = value;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (x[j] < model.vars[j].lower - kLpTolerance || x[j] > model.vars[j].upper + kLpTolerance) {
      return false;
    }
    if (model.vars[j].integer && std::abs(x[j] - std::round(x[j])) > kLpTolerance) return false;
  }
  for (const auto& row : model.rows) {
    double lhs = 0.0;
    for (const auto& [var, coef] : row.coeffs) lhs += coef * x[var];
    const double slack = row.rhs - lhs;
    const double tol = kLpTolerance * (1.0 + std::abs(row.rhs));
    if (row.sense == RowSense::le && slack < -tol) return false;
    if (row.sense == RowSense::ge && slack > tol) return false;
    if (row.sense == RowSense::eq && std::abs(slack) > tol) return false;
  }
  return true;
}

double objective_of(const LinearModel& model, const std::vector<double>& x) {
  double obj = 0.0;
  for (std::size_t j = 0; j < model.vars.size(); ++j) obj += model.objective[j] * x[j];
  return obj;
}

}  // namespace

SolveOutcome solve_milp(const LinearModel& model, double time_limit_seconds) {
  const auto started = Clock::now();
  model.check();

  SolveOutcome out;
  if (!model.has_integer_vars()) {
    out = solve_lp(model);
    out.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
    return out;
  }

  Search search(model);

  std::vector<double> warm;
  if (!model.warm_start.empty() && warm_start_feasible(model, warm)) {
    search.offer(warm, objective_of(model, warm));
  }

  const double infinity_bound = search.maximize ? kLpInfinity : -kLpInfinity;
  if (time_limit_seconds <= 0.0) {
    if (search.have_incumbent) {
      out.status = SolveStatus::feasible_limit;
      out.primal = search.incumbent;
      out.objective = search.incumbent_obj;
      out.bound = infinity_bound;
      out.message = "no time budget; returning warm-start incumbent";
    } else {
      out.status = SolveStatus::error;
      out.message = "time limit reached before any incumbent";
    }
    return out;
  }

  search.has_deadline = true;
  search.deadline = started + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(time_limit_seconds));

  const bool clean = search.explore(0);
  out.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();

  if (!clean) {
    out.status = search.unbounded ? SolveStatus::unbounded : SolveStatus::error;
    out.message = search.error;
    return out;
  }

  const double bound = search.root_solved ? search.root_bound : infinity_bound;
  if (search.truncated) {
    if (search.have_incumbent) {
      out.status = SolveStatus::feasible_limit;
      out.primal = search.incumbent;
      out.objective = search.incumbent_obj;
      out.bound = bound;
    } else {
      out.status = SolveStatus::error;
      out.message = "search truncated before any incumbent";
      out.bound = bound;
    }
    return out;
  }

  if (!search.have_incumbent) {
    out.status = SolveStatus::infeasible;
    return out;
  }
  out.status = SolveStatus::optimal;
  out.primal = search.incumbent;
  out.objective = search.incumbent_obj;
  out.bound = out.objective;
  return out;
}

}  // namespace lexrouter
