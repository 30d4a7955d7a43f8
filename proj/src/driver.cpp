#include "lexrouter/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "lexrouter/compact.hpp"

namespace lexrouter {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_left(Clock::time_point deadline) {
  return std::chrono::duration<double>(deadline - Clock::now()).count();
}

// Singleton warm start: one column per feasible (vehicle, intervention)
// pair, best durations first, capped at 5 per vehicle on average.
void seed_singletons(const Instance& inst, ColumnPool& pool) {
  std::vector<Column> singles;
  for (int v = 0; v < inst.num_vehicles(); ++v) {
    for (int i : inst.vehicles[v].eligible) {
      if (auto col = build_column(v, {i}, inst)) singles.push_back(std::move(*col));
    }
  }
  std::stable_sort(singles.begin(), singles.end(), [](const Column& a, const Column& b) {
    return a.duration > b.duration;
  });
  const std::size_t cap = static_cast<std::size_t>(5) * inst.num_vehicles();
  for (std::size_t c = 0; c < singles.size() && c < cap; ++c) pool.add(std::move(singles[c]));
}

bool has_any_work(const Instance& inst) {
  for (const auto& veh : inst.vehicles) {
    if (!veh.eligible.empty()) return true;
  }
  return false;
}

// Bound on how far the master LP value can sit below the true relaxation
// when pricing stopped at the emission tolerance: at most one basis column
// per row can carry a missed positive reduced cost.
double closure_margin(const Instance& inst, double u) {
  const double rows = inst.num_interventions() + inst.num_vehicles() + 2;
  return 2e-6 * rows + 1e-9 * std::abs(u) + 1e-9;
}

}  // namespace

CgPhaseOutcome solve_cg_phase(const Instance& inst, const PhaseSpec& phase, ColumnPool& pool,
                              const RunConfig& config, double budget_seconds,
                              const LexSolution* warm) {
  const auto started = Clock::now();
  const auto deadline =
      started + std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(std::max(0.0, budget_seconds)));

  CgPhaseOutcome out;
  out.state.phase = phase.phase;
  out.stats.phase = to_string(phase.phase);

  if (!has_any_work(inst)) {
    out.state.lp_value = 0.0;
    out.state.integer_value = 0.0;
    out.stats.exact = true;
    out.stats.lp_value = 0.0;
    out.solution.exact = true;
    recompute_objectives(out.solution, inst);
    out.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
    return out;
  }

  if (config.initial_pool == RunConfig::InitialPool::singletons && pool.size() == 0) {
    seed_singletons(inst, pool);
    out.stats.routes_generated += static_cast<int>(pool.size());
  }

  bool truncated = false;

  // Generation loop: solve the restricted master, price at the current
  // dominance level, add improving routes; an empty round activates one more
  // condition until all four are on.
  int level = config.relaxation ? 1 : 4;
  DualValues duals = zero_duals(inst);
  double u = 0.0;
  while (true) {
    if (seconds_left(deadline) <= 0.0) {
      truncated = true;
      break;
    }
    const MasterLpSolution mp = solve_master_lp(pool, phase, inst);
    if (mp.status != SolveStatus::optimal) {
      throw ModelError(std::string("restricted master LP came back ") + to_string(mp.status));
    }
    u = mp.objective;
    duals = mp.duals;
    ++out.stats.iterations;
    out.stats.lp_trajectory.push_back(u);
    out.stats.level_trajectory.push_back(level);

    int added = 0;
    PricingConfig pricing;
    pricing.mode = PricingConfig::Mode::improve;
    pricing.max_routes = config.eta;
    pricing.level.active = level;
    pricing.label_cap = config.label_cap;
    for (int v = 0; v < inst.num_vehicles() && seconds_left(deadline) > 0.0; ++v) {
      PricingResult res = price_vehicle(v, duals, phase, pricing, inst);
      for (auto& route : res.routes) {
        if (pool.add(std::move(route.column))) ++added;
      }
    }
    if (seconds_left(deadline) <= 0.0) {
      truncated = true;
      break;
    }
    out.stats.routes_generated += added;
    if (added > 0) continue;
    if (level < 4) {
      ++level;
      continue;
    }
    break;
  }
  out.state.lp_value = u;
  out.stats.lp_value = u;

  // Integer restricted solve on whatever the loop produced.
  const double for_first_int = std::max(0.5, seconds_left(deadline) * 0.3);
  IntegerRestrictedResult incumbent =
      solve_integer_restricted(pool, phase, for_first_int, inst, warm);
  if (incumbent.status != SolveStatus::optimal &&
      incumbent.status != SolveStatus::feasible_limit) {
    throw ModelError(std::string("integer restricted master came back ") +
                     to_string(incumbent.status));
  }
  bool integer_optimal = incumbent.status == SolveStatus::optimal;
  out.stats.pre_closure_integer_value = incumbent.objective;
  out.state.integer_value = incumbent.objective;

  // Closure: enumerate every route that could still matter for the full
  // integer problem and re-solve. The margin absorbs the LP tolerance, so
  // the enumeration can only be a superset of what exactness needs.
  bool closure_complete = !truncated;
  if (!truncated) {
    const double threshold = closure_threshold(out.state) - closure_margin(inst, u);
    PricingConfig closing;
    closing.mode = PricingConfig::Mode::closure;
    closing.threshold = threshold;
    closing.label_cap = config.label_cap;
    int closure_added = 0;
    for (int v = 0; v < inst.num_vehicles(); ++v) {
      if (seconds_left(deadline) <= 0.0) {
        closure_complete = false;
        truncated = true;
        break;
      }
      PricingResult res = price_vehicle(v, duals, phase, closing, inst);
      closure_complete = closure_complete && res.exhaustive;
      for (auto& route : res.routes) {
        if (pool.add(std::move(route.column))) ++closure_added;
      }
    }
    out.stats.closure_routes = closure_added;
    out.stats.routes_generated += closure_added;

    if (closure_added > 0 || incumbent.status != SolveStatus::optimal) {
      const double remaining = std::max(0.5, seconds_left(deadline));
      IntegerRestrictedResult final_int =
          solve_integer_restricted(pool, phase, remaining, inst, &incumbent.solution);
      if (final_int.status == SolveStatus::optimal ||
          final_int.status == SolveStatus::feasible_limit) {
        if (final_int.objective < incumbent.objective - 1e-9) {
          throw ModelError("closure re-solve degraded the incumbent");
        }
        incumbent = std::move(final_int);
        integer_optimal = incumbent.status == SolveStatus::optimal;
      }
    }
  }

  out.state.integer_value = incumbent.objective;
  out.stats.integer_value = incumbent.objective;
  out.solution = std::move(incumbent.solution);
  out.stats.exact = !truncated && closure_complete && integer_optimal;
  out.solution.exact = out.stats.exact;
  out.solution.status = out.stats.exact ? "optimal" : "feasible-limit";
  out.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();

  // Weak-duality sanity: u is an upper bound for the restricted integer
  // problem in every (maximization) phase.
  if (out.state.lp_value.has_value() && out.state.integer_value.has_value() && !truncated &&
      *out.state.lp_value < *out.state.integer_value - 1e-6 * (1 + std::abs(u))) {
    throw ModelError("master bound fell below the integer value");
  }
  return out;
}

namespace {

std::pair<LexSolution, RunStats> run_compact(const Instance& inst, const RunConfig& config) {
  const auto started = Clock::now();
  RunStats stats;
  LexSolution solution;

  if (inst.num_interventions() == 0) {
    solution.exact = true;
    stats.exact = true;
    return {solution, stats};
  }

  if (config.mode == RunConfig::Mode::weighted) {
    PhaseSpec phase{Phase::weighted, compute_big_m(inst).value, 0};
    const CompactModel cm = build_compact(inst, phase);
    const SolveOutcome r = solve_milp(cm.model, config.time_limit);
    if (r.status != SolveStatus::optimal && r.status != SolveStatus::feasible_limit) {
      throw ModelError(std::string("compact solve came back ") + to_string(r.status) +
                       (r.message.empty() ? "" : ": " + r.message));
    }
    solution = decode_compact(r, cm, inst);
    PhaseStats ps;
    ps.phase = "weighted";
    ps.integer_value = phase.objective(solution.total_duration, solution.total_cost);
    ps.lp_value = r.bound;
    ps.exact = r.status == SolveStatus::optimal;
    ps.wall_seconds = r.wall_seconds;
    stats.phases.push_back(std::move(ps));
    stats.exact = r.status == SolveStatus::optimal;
  } else {
    // Duration stage, then cost stage holding the attained duration.
    const double half = config.time_limit / 2;
    PhaseSpec duration_phase{Phase::duration, 0, 0};
    const CompactModel first = build_compact(inst, duration_phase);
    const SolveOutcome r1 = solve_milp(first.model, half);
    if (r1.status != SolveStatus::optimal && r1.status != SolveStatus::feasible_limit) {
      throw ModelError(std::string("compact duration stage came back ") + to_string(r1.status) +
                       (r1.message.empty() ? "" : ": " + r1.message));
    }
    const LexSolution stage1 = decode_compact(r1, first, inst);
    PhaseStats ps1;
    ps1.phase = "duration";
    ps1.integer_value = static_cast<double>(stage1.total_duration);
    ps1.lp_value = r1.bound;
    ps1.exact = r1.status == SolveStatus::optimal;
    ps1.wall_seconds = r1.wall_seconds;
    stats.phases.push_back(std::move(ps1));

    PhaseSpec cost_phase{Phase::cost, 0, stage1.total_duration};
    CompactModel second = build_compact(inst, cost_phase);
    // The duration-stage schedule is a feasible incumbent for the cost stage.
    for (const auto& route : stage1.routes) {
      const auto& ents = second.entities[route.vehicle];
      const int nv = static_cast<int>(ents.size());
      int prev_local = 0;
      for (int stop : route.stops) {
        const int local =
            static_cast<int>(std::find(ents.begin(), ents.end(), stop) - ents.begin());
        second.model.warm_start.push_back(
            {second.arc_var[route.vehicle][static_cast<std::size_t>(prev_local) * nv + local],
             1.0});
        prev_local = local;
      }
      second.model.warm_start.push_back(
          {second.arc_var[route.vehicle][static_cast<std::size_t>(prev_local) * nv], 1.0});
      for (std::size_t k = 0; k < route.stops.size(); ++k) {
        second.model.warm_start.push_back(
            {second.u_var[route.stops[k]], static_cast<double>(route.start_times[k])});
        const auto& iv = inst.interventions[route.stops[k]];
        if (second.z_var[route.stops[k]] >= 0) {
          second.model.warm_start.push_back(
              {second.z_var[route.stops[k]],
               route.start_times[k] >= inst.midday ? 1.0 : 0.0});
        }
        (void)iv;
      }
    }
    const double rest = std::max(0.5, config.time_limit - r1.wall_seconds);
    const SolveOutcome r2 = solve_milp(second.model, rest);
    if (r2.status != SolveStatus::optimal && r2.status != SolveStatus::feasible_limit) {
      throw ModelError(std::string("compact cost stage came back ") + to_string(r2.status) +
                       (r2.message.empty() ? "" : ": " + r2.message));
    }
    solution = decode_compact(r2, second, inst);
    if (solution.total_duration < stage1.total_duration) {
      throw ModelError("cost stage lost duration against its floor");
    }
    PhaseStats ps2;
    ps2.phase = "cost";
    ps2.integer_value = -to_currency(solution.total_cost);
    ps2.lp_value = r2.bound;
    ps2.exact = r2.status == SolveStatus::optimal;
    ps2.wall_seconds = r2.wall_seconds;
    stats.phases.push_back(std::move(ps2));
    stats.exact = stats.phases[0].exact && stats.phases[1].exact;
  }

  solution.exact = stats.exact;
  solution.status = stats.exact ? "optimal" : "feasible-limit";
  stats.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return {solution, stats};
}

}  // namespace

std::pair<LexSolution, RunStats> solve_weighted(const Instance& inst, const RunConfig& config) {
  if (config.formulation == RunConfig::Formulation::compact) return run_compact(inst, config);

  const auto started = Clock::now();
  RunStats stats;
  LexSolution solution;
  if (inst.num_interventions() == 0) {
    solution.exact = true;
    stats.exact = true;
    return {solution, stats};
  }

  PhaseSpec phase{Phase::weighted, compute_big_m(inst).value, 0};
  ColumnPool pool;
  CgPhaseOutcome outcome = solve_cg_phase(inst, phase, pool, config, config.time_limit);
  solution = std::move(outcome.solution);
  stats.phases.push_back(std::move(outcome.stats));
  stats.exact = stats.phases.back().exact;
  stats.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return {solution, stats};
}

std::pair<LexSolution, RunStats> solve_sequential(const Instance& inst, const RunConfig& config) {
  if (config.formulation == RunConfig::Formulation::compact) return run_compact(inst, config);

  const auto started = Clock::now();
  RunStats stats;
  LexSolution solution;
  if (inst.num_interventions() == 0) {
    solution.exact = true;
    stats.exact = true;
    return {solution, stats};
  }

  // Duration stage; unused budget rolls into the cost stage.
  PhaseSpec duration_phase{Phase::duration, 0, 0};
  ColumnPool pool;
  CgPhaseOutcome first = solve_cg_phase(inst, duration_phase, pool, config, config.time_limit / 2);
  const std::int64_t duration_floor = first.solution.total_duration;
  stats.phases.push_back(first.stats);

  PhaseSpec cost_phase{Phase::cost, 0, duration_floor};
  const double elapsed = std::chrono::duration<double>(Clock::now() - started).count();
  CgPhaseOutcome second = solve_cg_phase(inst, cost_phase, pool, config,
                                         std::max(0.5, config.time_limit - elapsed),
                                         &first.solution);
  if (second.solution.total_duration < duration_floor) {
    throw ModelError("cost stage lost duration against its floor");
  }
  solution = std::move(second.solution);
  stats.phases.push_back(std::move(second.stats));
  stats.exact = stats.phases[0].exact && stats.phases[1].exact;
  solution.exact = stats.exact;
  solution.status = stats.exact ? "optimal" : "feasible-limit";
  stats.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return {solution, stats};
}

std::pair<LexSolution, RunStats> solve(const Instance& inst, const RunConfig& config) {
  return config.mode == RunConfig::Mode::weighted ? solve_weighted(inst, config)
                                                  : solve_sequential(inst, config);
}

}  // namespace lexrouter
