#include "lexrouter/model.hpp"

#include <algorithm>

namespace lexrouter {

bool is_long(const Intervention& iv) { return iv.duration >= kLongThresholdMinutes; }

int Instance::travel_entities(int vehicle, int from_iv, int to_iv) const {
  const int a = from_iv < 0 ? vehicles[vehicle].depot_node : interventions[from_iv].node;
  const int b = to_iv < 0 ? vehicles[vehicle].depot_node : interventions[to_iv].node;
  return travel(a, b);
}

Micro Instance::arc_cost_entities(int vehicle, int from_iv, int to_iv) const {
  const int a = from_iv < 0 ? vehicles[vehicle].depot_node : interventions[from_iv].node;
  const int b = to_iv < 0 ? vehicles[vehicle].depot_node : interventions[to_iv].node;
  return arc_cost(a, b);
}

std::int64_t Instance::duration_gcd() const {
  std::int64_t g = 0;
  for (const auto& iv : interventions) g = std::gcd(g, static_cast<std::int64_t>(iv.duration));
  return g;
}

Micro Instance::cost_quantum() const {
  std::int64_t g = 0;
  for (const auto& v : vehicles) g = std::gcd(g, v.personnel_cost);
  for (int a = 0; a < num_nodes(); ++a) {
    for (int b = 0; b < num_nodes(); ++b) {
      if (a != b) g = std::gcd(g, arc_cost(a, b));
    }
  }
  return g;
}

void Instance::finalize() {
  eligible_sets.assign(vehicles.size(), Bitset(interventions.size()));
  for (std::size_t v = 0; v < vehicles.size(); ++v) {
    auto& elig = vehicles[v].eligible;
    std::sort(elig.begin(), elig.end());
    elig.erase(std::unique(elig.begin(), elig.end()), elig.end());
    for (int i : elig) {
      if (i < 0 || i >= num_interventions()) throw ModelError("eligible index out of range");
      eligible_sets[v].set(static_cast<std::size_t>(i));
    }
  }
}

std::vector<int> Column::node_sequence(const Instance& instance) const {
  std::vector<int> nodes;
  nodes.reserve(stops.size() + 2);
  nodes.push_back(instance.vehicles[vehicle].depot_node);
  for (int i : stops) nodes.push_back(instance.interventions[i].node);
  nodes.push_back(instance.vehicles[vehicle].depot_node);
  return nodes;
}

RouteMetrics route_metrics(const std::vector<int>& stops, int vehicle, const Instance& instance) {
  RouteMetrics m;
  m.coverage = Bitset(instance.interventions.size());
  m.cost = instance.vehicles[vehicle].personnel_cost;
  int prev = -1;  // depot
  for (int stop : stops) {
    if (stop < 0 || stop >= instance.num_interventions() || !instance.can_serve(vehicle, stop)) {
      throw ModelError("stop " + std::to_string(stop) + " not eligible for vehicle " +
                       instance.vehicles[vehicle].id);
    }
    m.duration += instance.interventions[stop].duration;
    m.cost += instance.arc_cost_entities(vehicle, prev, stop);
    m.coverage.set(static_cast<std::size_t>(stop));
    prev = stop;
  }
  m.cost += instance.arc_cost_entities(vehicle, prev, -1);
  return m;
}

BigM compute_big_m(const Instance& instance) {
  if (instance.interventions.empty()) {
    throw ModelError("hierarchy weight undefined without interventions");
  }
  int min_duration = instance.interventions.front().duration;
  for (const auto& iv : instance.interventions) min_duration = std::min(min_duration, iv.duration);

  // Worst currency-per-minute travel rate over node pairs; co-located pairs
  // (zero travel time) are excluded. Loaders reject dist > 0 with time = 0.
  Rational max_rate(0);
  for (int a = 0; a < instance.num_nodes(); ++a) {
    for (int b = 0; b < instance.num_nodes(); ++b) {
      if (a == b || instance.travel(a, b) == 0) continue;
      const Rational rate(instance.distance(a, b) * instance.distance_tariff,
                          static_cast<std::int64_t>(instance.travel(a, b)) * kMicroScale);
      if (max_rate < rate) max_rate = rate;
    }
  }

  Micro cost_sum = 0;
  Micro cost_min = instance.vehicles.empty() ? 0 : instance.vehicles.front().personnel_cost;
  for (const auto& v : instance.vehicles) {
    cost_sum += v.personnel_cost;
    cost_min = std::min(cost_min, v.personnel_cost);
  }

  BigM m;
  m.duration_gcd = instance.duration_gcd();
  m.bracket = Rational(instance.num_vehicles()) *
                  Rational(instance.day_end - min_duration) * max_rate +
              Rational(cost_sum - cost_min, kMicroScale);
  m.value = (m.bracket / Rational(m.duration_gcd)).ceil() + 1;
  return m;
}

void recompute_objectives(LexSolution& solution, const Instance& instance) {
  solution.total_duration = 0;
  solution.total_cost = 0;
  for (const auto& route : solution.routes) {
    const RouteMetrics m = route_metrics(route.stops, route.vehicle, instance);
    solution.total_duration += m.duration;
    solution.total_cost += m.cost;
  }
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::coverage: return "coverage";
    case ViolationKind::route_shape: return "route_shape";
    case ViolationKind::eligibility: return "eligibility";
    case ViolationKind::time_chaining: return "time_chaining";
    case ViolationKind::day_end: return "day_end";
    case ViolationKind::window: return "window";
    case ViolationKind::half_day: return "half_day";
    case ViolationKind::resource: return "resource";
  }
  return "?";
}

std::vector<Violation> validate_schedule(const LexSolution& solution, const Instance& instance) {
  std::vector<Violation> out;
  auto flag = [&](ViolationKind kind, std::string detail) {
    out.push_back({kind, std::move(detail)});
  };

  std::vector<int> covered_by(instance.interventions.size(), -1);
  std::vector<bool> vehicle_used(instance.vehicles.size(), false);

  for (const auto& route : solution.routes) {
    if (route.vehicle < 0 || route.vehicle >= instance.num_vehicles()) {
      flag(ViolationKind::route_shape, "route references unknown vehicle");
      continue;
    }
    const auto& veh = instance.vehicles[route.vehicle];
    if (vehicle_used[route.vehicle]) {
      flag(ViolationKind::route_shape, "vehicle " + veh.id + " appears in two routes");
      continue;
    }
    vehicle_used[route.vehicle] = true;
    if (route.stops.size() != route.start_times.size()) {
      flag(ViolationKind::route_shape, "route of " + veh.id + " lacks start times");
      continue;
    }

    std::vector<std::int64_t> used(instance.intervals.size(), 0);
    int prev = -1;
    int prev_end = 0;
    bool shape_ok = true;
    bool eligible_ok = true;
    for (std::size_t k = 0; k < route.stops.size(); ++k) {
      const int i = route.stops[k];
      if (i < 0 || i >= instance.num_interventions()) {
        flag(ViolationKind::route_shape, "unknown intervention index in route of " + veh.id);
        shape_ok = false;
        break;
      }
      const auto& iv = instance.interventions[i];
      if (!instance.can_serve(route.vehicle, i)) {
        flag(ViolationKind::eligibility, veh.id + " cannot serve " + iv.id);
        eligible_ok = false;
      }
      if (covered_by[i] >= 0) {
        flag(ViolationKind::coverage, iv.id + " served more than once");
      } else {
        covered_by[i] = route.vehicle;
      }
      const int start = route.start_times[k];
      const int end = start + iv.duration;
      if (start < iv.window_start || end > iv.window_end) {
        flag(ViolationKind::window, iv.id + " scheduled at " + std::to_string(start) +
                                        " outside [" + std::to_string(iv.window_start) + ", " +
                                        std::to_string(iv.window_end) + "]");
      }
      if (!is_long(iv) && start < instance.midday && end > instance.midday) {
        flag(ViolationKind::half_day, iv.id + " straddles the lunch instant");
      }
      const int earliest = (prev < 0)
                               ? instance.travel_entities(route.vehicle, -1, i)
                               : prev_end + instance.travel_entities(route.vehicle, prev, i);
      if (start < earliest) {
        flag(ViolationKind::time_chaining,
             iv.id + " starts at " + std::to_string(start) + " before reachable time " +
                 std::to_string(earliest));
      }
      for (std::size_t r = 0; r < used.size(); ++r) {
        used[r] += r < iv.resource_use.size() ? iv.resource_use[r] : 0;
      }
      prev = i;
      prev_end = end;
    }
    if (!shape_ok) continue;
    if (!route.stops.empty()) {
      const int back = prev_end + instance.travel_entities(route.vehicle, prev, -1);
      if (back > instance.day_end) {
        flag(ViolationKind::day_end,
             veh.id + " returns at " + std::to_string(back) + " after day end");
      }
    }
    for (std::size_t r = 0; r < used.size(); ++r) {
      const std::int64_t cap = r < veh.capacity.size() ? veh.capacity[r] : 0;
      if (used[r] > cap) {
        flag(ViolationKind::resource, veh.id + " exceeds capacity on interval " +
                                          instance.intervals[r].id + " (" + std::to_string(used[r]) +
                                          " > " + std::to_string(cap) + ")");
      }
    }

    // Duplicate stops within one route count against coverage above, but an
    // inconsistent precomputed total is a shape defect of the column itself.
    std::vector<int> sorted = route.stops;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      flag(ViolationKind::route_shape, "route of " + veh.id + " visits an intervention twice");
    } else if (eligible_ok) {
      const RouteMetrics m = route_metrics(route.stops, route.vehicle, instance);
      if (m.duration != route.duration || m.cost != route.cost || !(m.coverage == route.coverage)) {
        flag(ViolationKind::route_shape, "route of " + veh.id + " carries stale totals");
      }
    }
  }
  return out;
}

}  // namespace lexrouter
