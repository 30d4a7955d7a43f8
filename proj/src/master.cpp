#include "lexrouter/master.hpp"

#include <algorithm>

namespace lexrouter {

namespace {

std::size_t route_hash(const Column& column) {
  std::size_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::size_t>(column.vehicle);
  for (int stop : column.stops) {
    h ^= static_cast<std::size_t>(stop) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

double column_objective(const Column& column, const PhaseSpec& phase) {
  switch (phase.phase) {
    case Phase::weighted:
      return static_cast<double>(phase.hierarchy_weight) * static_cast<double>(column.duration) -
             to_currency(column.cost);
    case Phase::duration:
      return static_cast<double>(column.duration);
    case Phase::cost:
      return -to_currency(column.cost);
  }
  return 0.0;
}

}  // namespace

bool ColumnPool::add(Column column) {
  const std::size_t h = route_hash(column);
  if (seen_.contains(h)) {
    // Hash hit: confirm against the stored columns before rejecting.
    for (const auto& existing : columns_) {
      if (existing.same_route(column)) return false;
    }
  }
  seen_.insert(h);
  columns_.push_back(std::move(column));
  return true;
}

MasterModel build_master_lp(const ColumnPool& pool, const PhaseSpec& phase,
                            const Instance& instance) {
  MasterModel mm;
  LinearModel& m = mm.model;
  m.sense = ObjSense::maximize;
  m.objective_granularity = phase.granularity(instance);

  for (int i = 0; i < instance.num_interventions(); ++i) {
    mm.coverage_row.push_back(m.add_row("cover_" + instance.interventions[i].id, RowSense::le, 1.0));
  }
  for (int v = 0; v < instance.num_vehicles(); ++v) {
    mm.vehicle_row.push_back(m.add_row("veh_" + instance.vehicles[v].id, RowSense::le, 1.0));
  }
  if (phase.phase == Phase::cost) {
    mm.duration_row =
        m.add_row("min_duration", RowSense::ge, static_cast<double>(phase.min_duration));
  }

  for (std::size_t c = 0; c < pool.columns().size(); ++c) {
    const Column& col = pool.columns()[c];
    const int var = m.add_variable("route_" + std::to_string(c), 0.0, 1.0, false,
                                   column_objective(col, phase));
    col.coverage.for_each([&](std::size_t i) { m.add_coeff(mm.coverage_row[i], var, 1.0); });
    m.add_coeff(mm.vehicle_row[col.vehicle], var, 1.0);
    if (mm.duration_row >= 0) {
      m.add_coeff(mm.duration_row, var, static_cast<double>(col.duration));
    }
  }
  return mm;
}

MasterLpSolution solve_master_lp(const ColumnPool& pool, const PhaseSpec& phase,
                                 const Instance& instance) {
  const MasterModel mm = build_master_lp(pool, phase, instance);
  const SolveOutcome r = solve_lp(mm.model);

  MasterLpSolution out;
  out.status = r.status;
  out.objective = r.objective;
  out.lambda = r.primal;
  out.duals = zero_duals(instance);
  if (r.status == SolveStatus::optimal) {
    for (int i = 0; i < instance.num_interventions(); ++i) {
      out.duals.coverage[i] = r.duals[mm.coverage_row[i]];
    }
    for (int v = 0; v < instance.num_vehicles(); ++v) {
      out.duals.vehicle[v] = r.duals[mm.vehicle_row[v]];
    }
    if (mm.duration_row >= 0) {
      // The raw dual of a >= row is <= 0 under the max convention; the
      // pricing formula consumes its magnitude.
      out.duals.min_duration = -r.duals[mm.duration_row];
    }
  }
  return out;
}

double reduced_cost(const Column& column, const DualValues& duals, const PhaseSpec& phase,
                    const Instance& instance) {
  (void)instance;
  double nu_sum = 0.0;
  column.coverage.for_each([&](std::size_t i) { nu_sum += duals.coverage[i]; });
  const double mu = duals.vehicle[column.vehicle];
  switch (phase.phase) {
    case Phase::weighted:
      return static_cast<double>(phase.hierarchy_weight) * static_cast<double>(column.duration) -
             to_currency(column.cost) - mu - nu_sum;
    case Phase::duration:
      return static_cast<double>(column.duration) - mu - nu_sum;
    case Phase::cost:
      return -to_currency(column.cost) - mu - nu_sum +
             static_cast<double>(column.duration) * duals.min_duration;
  }
  return 0.0;
}

IntegerRestrictedResult solve_integer_restricted(const ColumnPool& pool, const PhaseSpec& phase,
                                                 double time_limit_seconds,
                                                 const Instance& instance,
                                                 const LexSolution* warm) {
  MasterModel mm = build_master_lp(pool, phase, instance);
  for (auto& var : mm.model.vars) var.integer = true;

  if (warm != nullptr) {
    for (const auto& route : warm->routes) {
      for (std::size_t c = 0; c < pool.columns().size(); ++c) {
        if (pool.columns()[c].same_route(route)) {
          mm.model.warm_start.push_back({static_cast<int>(c), 1.0});
          break;
        }
      }
    }
  }

  const SolveOutcome r = solve_milp(mm.model, time_limit_seconds);
  IntegerRestrictedResult out;
  out.status = r.status;
  if (r.status != SolveStatus::optimal && r.status != SolveStatus::feasible_limit) return out;

  for (std::size_t c = 0; c < pool.columns().size(); ++c) {
    if (r.primal[c] > 0.5) out.solution.routes.push_back(pool.columns()[c]);
  }
  recompute_objectives(out.solution, instance);
  const auto violations = validate_schedule(out.solution, instance);
  if (!violations.empty()) {
    throw ModelError("integer restricted master produced an invalid schedule: " +
                     violations.front().detail);
  }
  out.objective = phase.objective(out.solution.total_duration, out.solution.total_cost);
  out.solution.exact = r.status == SolveStatus::optimal;
  out.solution.status = to_string(r.status);
  return out;
}

double closure_threshold(const MasterState& state) {
  if (!state.lp_value.has_value() || !state.integer_value.has_value()) {
    throw ModelError("closure threshold needs both the LP and integer values");
  }
  return *state.integer_value - *state.lp_value;
}

}  // namespace lexrouter
