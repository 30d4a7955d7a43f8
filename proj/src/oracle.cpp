#include "lexrouter/oracle.hpp"

#include <algorithm>
#include <map>

#include "lexrouter/pricing.hpp"

namespace lexrouter {

namespace {

void check_budget(const Instance& inst, const EnumerationBudget& budget) {
  if (inst.num_interventions() > budget.max_interventions ||
      inst.num_vehicles() > budget.max_vehicles) {
    throw BudgetError("instance exceeds the enumeration budget (" +
                      std::to_string(inst.num_interventions()) + " interventions / " +
                      std::to_string(inst.num_vehicles()) + " vehicles)");
  }
}

std::uint32_t coverage_mask(const Column& column) {
  std::uint32_t mask = 0;
  column.coverage.for_each([&](std::size_t i) { mask |= 1u << i; });
  return mask;
}

}  // namespace

std::vector<Column> enumerate_routes(int vehicle, const Instance& inst,
                                     const EnumerationBudget& budget) {
  check_budget(inst, budget);
  const DualValues duals = zero_duals(inst);
  const PhaseSpec phase{Phase::duration, 0, 0};

  std::vector<Column> routes;
  std::vector<int> stops;
  std::vector<int> starts;

  auto dfs = [&](auto&& self, const Label& label) -> void {
    if (!stops.empty()) {
      if (auto closed = extend(label, -1, inst, duals, phase)) {
        if (routes.size() >= budget.max_routes_per_vehicle) {
          throw BudgetError("route enumeration cap exceeded for vehicle " +
                            inst.vehicles[vehicle].id);
        }
        Column col;
        col.vehicle = vehicle;
        col.stops = stops;
        col.start_times = starts;
        col.duration = closed->duration;
        col.cost = closed->cost;
        col.coverage = closed->visited;
        routes.push_back(std::move(col));
      }
    }
    std::vector<std::size_t> targets;
    label.reachable.for_each([&](std::size_t j) { targets.push_back(j); });
    for (std::size_t j : targets) {
      auto next = extend(label, static_cast<int>(j), inst, duals, phase);
      if (!next) continue;
      stops.push_back(static_cast<int>(j));
      starts.push_back(next->start);
      self(self, *next);
      stops.pop_back();
      starts.pop_back();
    }
  };
  dfs(dfs, initial_label(vehicle, duals, phase, inst));
  return routes;
}

LexSolution brute_force_lex_optimum(const Instance& inst, const EnumerationBudget& budget) {
  check_budget(inst, budget);
  const int V = inst.num_vehicles();
  const std::uint32_t masks = 1u << inst.num_interventions();

  // Per vehicle, the cheapest route for every coverage set it can serve
  // (duration is fixed by the set); ties keep the smallest stop sequence.
  std::vector<std::map<std::uint32_t, Column>> best_by_coverage(V);
  for (int v = 0; v < V; ++v) {
    for (Column& route : enumerate_routes(v, inst, budget)) {
      const std::uint32_t mask = coverage_mask(route);
      auto it = best_by_coverage[v].find(mask);
      if (it == best_by_coverage[v].end() || route.cost < it->second.cost ||
          (route.cost == it->second.cost && route.stops < it->second.stops)) {
        best_by_coverage[v][mask] = std::move(route);
      }
    }
  }

  struct State {
    bool reachable = false;
    Micro cost = 0;
    std::vector<Column> routes;
  };
  // Compare assignments as per-vehicle stop tuples; absent routes come first.
  auto tuple_less = [V](const std::vector<Column>& a, const std::vector<Column>& b) {
    std::vector<std::vector<int>> ta(V), tb(V);
    for (const auto& c : a) ta[c.vehicle] = c.stops;
    for (const auto& c : b) tb[c.vehicle] = c.stops;
    return ta < tb;
  };

  std::vector<State> dp(masks);
  dp[0].reachable = true;
  for (int v = 0; v < V; ++v) {
    std::vector<State> next = dp;  // skipping vehicle v keeps the state
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      if (!dp[mask].reachable) continue;
      for (const auto& [cover, route] : best_by_coverage[v]) {
        if ((cover & mask) != 0) continue;
        const std::uint32_t merged = mask | cover;
        const Micro cost = dp[mask].cost + route.cost;
        State& slot = next[merged];
        std::vector<Column> routes = dp[mask].routes;
        routes.push_back(route);
        if (!slot.reachable || cost < slot.cost ||
            (cost == slot.cost && tuple_less(routes, slot.routes))) {
          slot.reachable = true;
          slot.cost = cost;
          slot.routes = std::move(routes);
        }
      }
    }
    dp = std::move(next);
  }

  std::int64_t best_duration = -1;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    if (!dp[mask].reachable) continue;
    std::int64_t duration = 0;
    for (int i = 0; i < inst.num_interventions(); ++i) {
      if (mask & (1u << i)) duration += inst.interventions[i].duration;
    }
    const bool better =
        duration > best_duration ||
        (duration == best_duration && dp[mask].cost < dp[best_mask].cost) ||
        (duration == best_duration && dp[mask].cost == dp[best_mask].cost &&
         tuple_less(dp[mask].routes, dp[best_mask].routes));
    if (better) {
      best_duration = duration;
      best_mask = mask;
    }
  }

  LexSolution solution;
  solution.routes = dp[best_mask].routes;
  std::sort(solution.routes.begin(), solution.routes.end(),
            [](const Column& a, const Column& b) { return a.vehicle < b.vehicle; });
  recompute_objectives(solution, inst);
  solution.exact = true;
  solution.status = "optimal";

  const auto violations = validate_schedule(solution, inst);
  if (!violations.empty()) {
    throw ModelError("oracle produced an invalid schedule: " + violations.front().detail);
  }

  // Exchange stability: no single route change may improve (f1, -f2).
  std::uint32_t used_mask = 0;
  std::vector<std::uint32_t> route_mask(V, 0);
  std::vector<Micro> route_cost(V, 0);
  for (const auto& route : solution.routes) {
    route_mask[route.vehicle] = coverage_mask(route);
    route_cost[route.vehicle] = route.cost;
    used_mask |= route_mask[route.vehicle];
  }
  auto lex_improves = [&](std::int64_t f1, Micro f2) {
    return f1 > solution.total_duration ||
           (f1 == solution.total_duration && f2 < solution.total_cost);
  };
  for (int v = 0; v < V; ++v) {
    const std::uint32_t rest = used_mask & ~route_mask[v];
    std::int64_t rest_duration = 0;
    for (int i = 0; i < inst.num_interventions(); ++i) {
      if (rest & (1u << i)) rest_duration += inst.interventions[i].duration;
    }
    const Micro rest_cost = solution.total_cost - route_cost[v];
    if (lex_improves(rest_duration, rest_cost)) {
      throw ModelError("oracle instability: dropping a route improves the solution");
    }
    for (const auto& [cover, route] : best_by_coverage[v]) {
      if ((cover & rest) != 0) continue;
      std::int64_t f1 = rest_duration;
      for (int i = 0; i < inst.num_interventions(); ++i) {
        if (cover & (1u << i)) f1 += inst.interventions[i].duration;
      }
      if (lex_improves(f1, rest_cost + route.cost)) {
        throw ModelError("oracle instability: swapping a route improves the solution");
      }
    }
  }
  return solution;
}

}  // namespace lexrouter
