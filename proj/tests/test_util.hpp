#pragma once

// Hand-made instances for the test suites: nodes on a line, travel time
// |dx| * time_per_km (exact), distance |dx| km. The line metric keeps the
// triangle inequality tight and every quantity integral.

#include <map>
#include <string>
#include <vector>

#include "lexrouter/model.hpp"

namespace lexrouter::test {

class LineInstance {
 public:
  explicit LineInstance(int midday = 240, int day_end = 480, const std::string& delta = "1",
                        double time_per_km = 1.0)
      : time_per_km_(time_per_km) {
    inst_.midday = midday;
    inst_.day_end = day_end;
    inst_.distance_tariff = parse_scaled_decimal(delta, kMilliScale);
  }

  void interval(const std::string& id, int start, int end) {
    inst_.intervals.push_back({id, start, end});
  }

  int depot(int km) { return add_node(km, NodeKind::depot); }

  // Adds an intervention at the given position; q maps interval index to
  // minutes. Returns the intervention index.
  int job(int km, int duration, int window_start, int window_end,
          const std::map<int, std::int64_t>& q = {}) {
    const int node = add_node(km, NodeKind::intervention);
    Intervention iv;
    iv.id = "i" + std::to_string(inst_.interventions.size());
    iv.node = node;
    iv.duration = duration;
    iv.window_start = window_start;
    iv.window_end = window_end;
    iv.resource_use.assign(inst_.intervals.size(), 0);
    for (const auto& [k, minutes] : q) iv.resource_use[k] = minutes;
    inst_.interventions.push_back(std::move(iv));
    return static_cast<int>(inst_.interventions.size()) - 1;
  }

  // Adds a vehicle with personnel cost `g` (currency string). An empty
  // eligible list means everything added so far.
  int vehicle(int depot_node, const std::string& g, std::vector<int> eligible = {},
              std::vector<std::int64_t> capacity = {}) {
    Vehicle veh;
    veh.id = "v" + std::to_string(inst_.vehicles.size());
    veh.depot_node = depot_node;
    veh.personnel_cost = parse_scaled_decimal(g, kMicroScale);
    if (capacity.empty()) {
      veh.capacity.assign(inst_.intervals.size(), 1 << 20);
    } else {
      veh.capacity = std::move(capacity);
    }
    veh.eligible = std::move(eligible);
    eligible_all_.push_back(veh.eligible.empty());
    inst_.vehicles.push_back(std::move(veh));
    return static_cast<int>(inst_.vehicles.size()) - 1;
  }

  Instance build() {
    Instance out = inst_;
    const int n = out.num_nodes();
    out.travel_time.assign(static_cast<std::size_t>(n) * n, 0);
    out.travel_dist.assign(static_cast<std::size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const int dx = std::abs(km_[a] - km_[b]);
        out.travel_time[static_cast<std::size_t>(a) * n + b] =
            static_cast<int>(dx * time_per_km_ + 0.5);
        out.travel_dist[static_cast<std::size_t>(a) * n + b] = static_cast<Milli>(dx) * 1000;
      }
    }
    for (std::size_t v = 0; v < out.vehicles.size(); ++v) {
      if (eligible_all_[v]) {
        for (int i = 0; i < out.num_interventions(); ++i) out.vehicles[v].eligible.push_back(i);
      }
    }
    out.finalize();
    return out;
  }

 private:
  int add_node(int km, NodeKind kind) {
    inst_.node_ids.push_back("n" + std::to_string(inst_.node_ids.size()));
    inst_.node_kinds.push_back(kind);
    km_.push_back(km);
    return static_cast<int>(inst_.node_ids.size()) - 1;
  }

  Instance inst_;
  std::vector<int> km_;
  std::vector<bool> eligible_all_;
  double time_per_km_;
};

// One depot at 0, one vehicle serving every job; convenience for the many
// single-vehicle cases.
inline Instance single_vehicle_line(const std::vector<std::array<int, 4>>& jobs,
                                    const std::string& g = "50", const std::string& delta = "1",
                                    int midday = 240, int day_end = 480) {
  LineInstance b(midday, day_end, delta);
  const int d = b.depot(0);
  for (const auto& j : jobs) b.job(j[0], j[1], j[2], j[3]);
  b.vehicle(d, g);
  return b.build();
}

}  // namespace lexrouter::test
