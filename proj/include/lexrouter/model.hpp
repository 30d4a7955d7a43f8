#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lexrouter/numeric.hpp"

namespace lexrouter {

// Interventions of at least this duration may span the lunch instant; shorter
// ones must fit entirely into one half-day.
inline constexpr int kLongThresholdMinutes = 120;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Intervention {
  std::string id;
  int node = 0;          // physical location index
  int duration = 0;      // minutes
  int window_start = 0;  // earliest start, minutes from day start
  int window_end = 0;    // latest completion
  std::vector<std::int64_t> resource_use;  // minutes consumed per interval
};

bool is_long(const Intervention& iv);

struct Vehicle {
  std::string id;
  int depot_node = 0;
  Micro personnel_cost = 0;               // per-day cost, micro-currency
  std::vector<std::int64_t> capacity;     // minutes per interval
  std::vector<int> eligible;              // sorted intervention indices
};

struct ResourceInterval {
  std::string id;
  int start = 0;
  int end = 0;
};

enum class NodeKind { depot, intervention };

// Provenance carried through standardization; counts refer to the document
// the instance was derived from.
struct InstanceMeta {
  std::string source;
  int original_interventions = -1;
  int original_vehicles = -1;
  std::string note;
};

struct Instance {
  int midday = 0;              // end of the morning half
  int day_end = 0;             // end of the afternoon half
  Milli distance_tariff = 0;   // milli-currency per km
  std::vector<ResourceInterval> intervals;
  std::vector<std::string> node_ids;
  std::vector<NodeKind> node_kinds;
  std::vector<int> travel_time;    // minutes, row-major over nodes
  std::vector<Milli> travel_dist;  // milli-km, row-major over nodes
  std::vector<Intervention> interventions;
  std::vector<Vehicle> vehicles;
  InstanceMeta meta;

  // Derived, built by finalize().
  std::vector<Bitset> eligible_sets;

  int num_nodes() const { return static_cast<int>(node_ids.size()); }
  int num_interventions() const { return static_cast<int>(interventions.size()); }
  int num_vehicles() const { return static_cast<int>(vehicles.size()); }
  int num_intervals() const { return static_cast<int>(intervals.size()); }

  int travel(int node_a, int node_b) const {
    return travel_time[static_cast<std::size_t>(node_a) * node_ids.size() + node_b];
  }
  Milli distance(int node_a, int node_b) const {
    return travel_dist[static_cast<std::size_t>(node_a) * node_ids.size() + node_b];
  }
  // Travel between intervention entities (or -1 for a vehicle's depot).
  int travel_entities(int vehicle, int from_iv, int to_iv) const;
  Micro arc_cost_entities(int vehicle, int from_iv, int to_iv) const;

  // delta * distance in exact micro-currency.
  Micro arc_cost(int node_a, int node_b) const {
    return distance_tariff * distance(node_a, node_b);
  }

  bool can_serve(int vehicle, int intervention) const {
    return eligible_sets[vehicle].test(static_cast<std::size_t>(intervention));
  }

  std::int64_t duration_gcd() const;

  // gcd of every cost atom (personnel costs and delta*dist products), micro.
  // The smallest possible nonzero difference between two route costs is a
  // multiple of this.
  Micro cost_quantum() const;

  // Rebuilds derived lookup structures; call after any structural edit.
  void finalize();
};

// One route of one vehicle: intervention stops in visit order (the depot at
// both ends is implicit), with canonical start times and precomputed totals.
struct Column {
  int vehicle = -1;
  std::vector<int> stops;
  std::vector<int> start_times;
  std::int64_t duration = 0;  // sum of stop durations, minutes
  Micro cost = 0;             // personnel + distance cost
  Bitset coverage;

  std::vector<int> node_sequence(const Instance& instance) const;
  bool same_route(const Column& o) const { return vehicle == o.vehicle && stops == o.stops; }
};

struct RouteMetrics {
  std::int64_t duration = 0;
  Micro cost = 0;
  Bitset coverage;
};

// Totals for a stop sequence: duration, personnel + distance cost, coverage.
// An empty sequence is a used-but-idle vehicle (duration 0, cost g_v).
// Throws ModelError if a stop is outside the vehicle's eligible set.
RouteMetrics route_metrics(const std::vector<int>& stops, int vehicle, const Instance& instance);

struct BigM {
  std::int64_t value = 1;       // integer, currency units
  Rational bracket;             // the bracketed cost-increase bound, currency
  std::int64_t duration_gcd = 1;
};

// Smallest integer weight that makes one duration unit outweigh any possible
// cost increase. Throws ModelError when there are no interventions.
BigM compute_big_m(const Instance& instance);

struct LexSolution {
  std::vector<Column> routes;       // at most one per vehicle
  std::int64_t total_duration = 0;  // f1, minutes
  Micro total_cost = 0;             // f2, micro-currency
  bool exact = false;
  std::string status = "optimal";
};

// Sums f1/f2 from the routes; never trusts solver objectives.
void recompute_objectives(LexSolution& solution, const Instance& instance);

enum class ViolationKind {
  coverage,       // intervention served more than once
  route_shape,    // duplicate stop, bad vehicle index, inconsistent totals
  eligibility,    // stop outside the vehicle's eligible set
  time_chaining,  // start earlier than previous completion + travel
  day_end,        // depot reached after the end of the day
  window,         // start or completion outside the window
  half_day,       // short intervention straddling the lunch instant
  resource        // interval capacity exceeded
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

// Checks every operational constraint class; an empty result means feasible.
// Violations are data, not errors.
std::vector<Violation> validate_schedule(const LexSolution& solution, const Instance& instance);

}  // namespace lexrouter
