#include "lexrouter/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace lexrouter {

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::weighted: return "weighted";
    case Phase::duration: return "duration";
    case Phase::cost: return "cost";
  }
  return "?";
}

double PhaseSpec::objective(std::int64_t total_duration, Micro total_cost) const {
  switch (phase) {
    case Phase::weighted:
      return static_cast<double>(hierarchy_weight) * static_cast<double>(total_duration) -
             to_currency(total_cost);
    case Phase::duration:
      return static_cast<double>(total_duration);
    case Phase::cost:
      return -to_currency(total_cost);
  }
  return 0.0;
}

double PhaseSpec::granularity(const Instance& instance) const {
  const std::int64_t dur_gcd = instance.duration_gcd();
  const Micro quantum = instance.cost_quantum();
  switch (phase) {
    case Phase::duration:
      return static_cast<double>(dur_gcd);
    case Phase::cost:
      return quantum > 0 ? to_currency(quantum) : 0.0;
    case Phase::weighted: {
      // f1 moves in multiples of the duration gcd weighted by M, f2 in
      // multiples of the cost quantum; differences live on the gcd lattice.
      if (dur_gcd == 0) return quantum > 0 ? to_currency(quantum) : 0.0;
      const Micro weight_step = hierarchy_weight * dur_gcd * kMicroScale;
      const Micro g = quantum > 0 ? std::gcd(weight_step, quantum) : weight_step;
      return to_currency(g);
    }
  }
  return 0.0;
}

DualValues zero_duals(const Instance& instance) {
  DualValues d;
  d.coverage.assign(instance.interventions.size(), 0.0);
  d.vehicle.assign(instance.vehicles.size(), 0.0);
  d.min_duration = 0.0;
  return d;
}

namespace {

// Reduced-cost gain of serving intervention `target`, travel excluded.
double service_gain(int target, const DualValues& duals, const PhaseSpec& phase,
                    const Instance& instance) {
  const double d = static_cast<double>(instance.interventions[target].duration);
  const double nu = duals.coverage[target];
  switch (phase.phase) {
    case Phase::weighted:
      return static_cast<double>(phase.hierarchy_weight) * d - nu;
    case Phase::duration:
      return d - nu;
    case Phase::cost:
      return d * duals.min_duration - nu;
  }
  return 0.0;
}

}  // namespace

Label initial_label(int vehicle, const DualValues& duals, const PhaseSpec& phase,
                    const Instance& instance) {
  Label label;
  label.vehicle = vehicle;
  label.last = -1;
  label.time = 0;
  label.start = 0;
  label.consumed.assign(instance.intervals.size(), 0);
  label.visited = Bitset(instance.interventions.size());
  label.reachable = instance.eligible_sets[vehicle];
  label.duration = 0;
  label.cost = instance.vehicles[vehicle].personnel_cost;
  const double fixed = phase.counts_cost()
                           ? to_currency(instance.vehicles[vehicle].personnel_cost)
                           : 0.0;
  label.reduced_cost = -(fixed + duals.vehicle[vehicle]);
  return label;
}

std::optional<Label> extend(const Label& label, int target, const Instance& instance,
                            const DualValues& duals, const PhaseSpec& phase) {
  if (label.closed) return std::nullopt;
  const auto& veh = instance.vehicles[label.vehicle];

  if (target < 0) {
    const int arrival = label.time + instance.travel_entities(label.vehicle, label.last, -1);
    if (arrival > instance.day_end) return std::nullopt;
    Label next = label;
    next.last = -1;
    next.time = arrival;
    next.start = arrival;
    next.reachable = Bitset(instance.interventions.size());
    const Micro leg = instance.arc_cost_entities(label.vehicle, label.last, -1);
    next.cost += leg;
    if (phase.counts_cost()) next.reduced_cost -= to_currency(leg);
    next.closed = true;
    return next;
  }

  if (!label.reachable.test(static_cast<std::size_t>(target))) return std::nullopt;
  const auto& iv = instance.interventions[target];

  const int arrival = label.time + instance.travel_entities(label.vehicle, label.last, target);
  int start = std::max(arrival, iv.window_start);
  if (!is_long(iv) && start < instance.midday && start + iv.duration > instance.midday) {
    start = std::max(instance.midday, iv.window_start);
  }
  if (start + iv.duration > iv.window_end) return std::nullopt;

  Label next = label;
  for (std::size_t k = 0; k < next.consumed.size(); ++k) {
    next.consumed[k] += iv.resource_use[k];
    if (next.consumed[k] > veh.capacity[k]) return std::nullopt;
  }
  next.last = target;
  next.start = start;
  next.time = start + iv.duration;
  next.visited.set(static_cast<std::size_t>(target));
  next.reachable.reset(static_cast<std::size_t>(target));
  next.duration += iv.duration;
  const Micro leg = instance.arc_cost_entities(label.vehicle, label.last, target);
  next.cost += leg;
  next.reduced_cost += service_gain(target, duals, phase, instance);
  if (phase.counts_cost()) next.reduced_cost -= to_currency(leg);
  prune_unreachable(next, instance);
  return next;
}

void prune_unreachable(Label& label, const Instance& instance) {
  const auto& veh = instance.vehicles[label.vehicle];
  std::vector<std::size_t> drop;
  label.reachable.for_each([&](std::size_t p) {
    const auto& iv = instance.interventions[p];
    const int arrival =
        label.time + instance.travel_entities(label.vehicle, label.last, static_cast<int>(p));
    int start = std::max(arrival, iv.window_start);
    if (!is_long(iv) && start < instance.midday && start + iv.duration > instance.midday) {
      start = std::max(instance.midday, iv.window_start);
    }
    if (start + iv.duration > iv.window_end) {
      drop.push_back(p);
      return;
    }
    if (start + iv.duration + instance.travel_entities(label.vehicle, static_cast<int>(p), -1) >
        instance.day_end) {
      drop.push_back(p);
      return;
    }
    for (std::size_t k = 0; k < label.consumed.size(); ++k) {
      if (label.consumed[k] + iv.resource_use[k] > veh.capacity[k]) {
        drop.push_back(p);
        return;
      }
    }
  });
  for (std::size_t p : drop) label.reachable.reset(p);
}

bool dominates(const Label& a, const Label& b, DominanceLevel level, const Instance& instance) {
  if (a.vehicle != b.vehicle || a.last != b.last) {
    throw ModelError("dominance compared across different vehicles or nodes");
  }
  if (level.active >= 1 && !(a.reduced_cost >= b.reduced_cost)) return false;
  if (level.active >= 2 && !b.reachable.is_subset_of(a.reachable)) return false;
  if (level.active >= 3) {
    const bool earlier = a.time <= b.time;
    const bool other_done = a.time > b.time && b.reachable.none();
    if (!earlier && !other_done) return false;
  }
  if (level.active >= 4) {
    const auto& veh = instance.vehicles[a.vehicle];
    for (std::size_t k = 0; k < a.consumed.size(); ++k) {
      if (a.consumed[k] <= b.consumed[k]) continue;
      std::int64_t potential_a = 0;
      a.reachable.for_each(
          [&](std::size_t p) { potential_a += instance.interventions[p].resource_use[k]; });
      if (potential_a <= veh.capacity[k] - a.consumed[k]) continue;
      std::int64_t potential_b = 0;
      b.reachable.for_each(
          [&](std::size_t p) { potential_b += instance.interventions[p].resource_use[k]; });
      if (potential_b == 0) continue;
      return false;
    }
  }
  return true;
}

namespace {

struct NodeKey {
  double key;
  int node;
  bool operator<(const NodeKey& o) const {
    return key < o.key || (key == o.key && node < o.node);
  }
};

class PricingRun {
 public:
  PricingRun(int vehicle, const DualValues& duals, const PhaseSpec& phase,
             const PricingConfig& config, const Instance& instance)
      : vehicle_(vehicle), duals_(duals), phase_(phase), config_(config), instance_(instance) {}

  PricingResult run() {
    const int ivs = instance_.num_interventions();
    buckets_.assign(ivs, {});
    stored_.assign(ivs, {});
    state_stored_.assign(ivs, {});
    alive_.clear();
    arena_.clear();
    queued_.assign(ivs, false);

    arena_.push_back(initial_label(vehicle_, duals_, phase_, instance_));
    alive_.push_back(true);

    // The queue starts with the depot; intervention nodes join as labels
    // reach them, ordered by a completion-time over gain ratio.
    expand(0);
    std::vector<NodeKey> queue;
    for (int j = 0; j < ivs; ++j) {
      if (queued_[j]) queue.push_back({node_key(j), j});
    }
    std::sort(queue.begin(), queue.end());

    while (!queue.empty() && !done_) {
      const int node = queue.front().node;
      queue.erase(queue.begin());
      queued_[node] = false;

      auto bucket = std::move(buckets_[node]);
      buckets_[node].clear();
      std::sort(bucket.begin(), bucket.end(), [&](int x, int y) {
        const double cx = arena_[x].reduced_cost;
        const double cy = arena_[y].reduced_cost;
        return cx > cy || (cx == cy && x < y);
      });
      for (int id : bucket) {
        if (!alive_[id]) continue;
        expand(id);
        if (done_) break;
      }

      for (int j = 0; j < ivs && !done_; ++j) {
        if (queued_[j] && std::find_if(queue.begin(), queue.end(), [&](const NodeKey& k) {
                            return k.node == j;
                          }) == queue.end()) {
          queue.push_back({node_key(j), j});
        }
      }
      std::sort(queue.begin(), queue.end());
    }

    result_.labels_created = arena_.size();
    return std::move(result_);
  }

 private:
  double node_key(int j) const {
    const auto& iv = instance_.interventions[j];
    const double completion = static_cast<double>(iv.window_start + iv.duration);
    const double benefit = std::max(service_gain(j, duals_, phase_, instance_), 1.0);
    return completion / benefit;
  }

  void expand(int id) {
    // Copy: the arena may reallocate while extending.
    const Label label = arena_[id];

    if (label.visited.any()) {
      if (auto closed = extend(label, -1, instance_, duals_, phase_)) {
        maybe_emit(*closed, id);
        if (done_) return;
      }
    }
    std::vector<std::size_t> targets;
    label.reachable.for_each([&](std::size_t j) { targets.push_back(j); });
    for (std::size_t j : targets) {
      if (arena_.size() >= config_.label_cap) {
        result_.exhaustive = false;
        done_ = true;
        return;
      }
      auto next = extend(label, static_cast<int>(j), instance_, duals_, phase_);
      if (!next) continue;
      next->parent = id;
      admit(std::move(*next), static_cast<int>(j));
    }
  }

  void admit(Label&& label, int node) {
    if (config_.mode == PricingConfig::Mode::closure) {
      if (!admissible_for_threshold(label)) return;
      if (config_.level.active >= 1 && !state_admit(label, node)) return;
    } else {
      if (config_.level.active >= 1) {
        for (int sid : stored_[node]) {
          if (alive_[sid] && dominates(arena_[sid], label, config_.level, instance_)) return;
        }
        // Reverse sweep: strictly dominated stored labels die.
        for (int sid : stored_[node]) {
          if (alive_[sid] && dominates(label, arena_[sid], config_.level, instance_) &&
              !dominates(arena_[sid], label, config_.level, instance_)) {
            alive_[sid] = false;
          }
        }
      }
    }
    const int id = static_cast<int>(arena_.size());
    arena_.push_back(std::move(label));
    alive_.push_back(true);
    buckets_[node].push_back(id);
    if (config_.mode != PricingConfig::Mode::closure || config_.level.active >= 1) {
      stored_[node].push_back(id);
    }
    queued_[node] = true;
  }

  // Closure mode prunes only within identical coverage state: same last
  // node, same visited set. There an earlier, no-cheaper label can stand in
  // for the other on every completion.
  bool state_admit(const Label& label, int node) {
    auto& slot = state_stored_[node][label.visited.hash()];
    for (int sid : slot) {
      if (!alive_[sid]) continue;
      const Label& s = arena_[sid];
      if (!(s.visited == label.visited)) continue;
      if (s.reduced_cost >= label.reduced_cost && s.time <= label.time) return false;
    }
    for (int sid : slot) {
      if (!alive_[sid]) continue;
      const Label& s = arena_[sid];
      if (!(s.visited == label.visited)) continue;
      if (label.reduced_cost >= s.reduced_cost && label.time <= s.time &&
          (label.reduced_cost > s.reduced_cost || label.time < s.time)) {
        alive_[sid] = false;
      }
    }
    slot.push_back(static_cast<int>(arena_.size()));
    return true;
  }

  // Optimistic completion bound: travel only costs, every reachable service
  // gain at most once.
  bool admissible_for_threshold(const Label& label) const {
    double best = label.reduced_cost;
    label.reachable.for_each([&](std::size_t p) {
      best += std::max(0.0, service_gain(static_cast<int>(p), duals_, phase_, instance_));
    });
    return best >= config_.threshold - 1e-9;
  }

  void maybe_emit(const Label& closed, int parent_id) {
    const bool wanted = config_.mode == PricingConfig::Mode::improve
                            ? closed.reduced_cost > config_.emit_tolerance
                            : closed.reduced_cost >= config_.threshold - 1e-9;
    if (!wanted) return;

    PricedRoute route;
    route.reduced_cost = closed.reduced_cost;
    Column& col = route.column;
    col.vehicle = vehicle_;
    col.duration = closed.duration;
    col.cost = closed.cost;
    col.coverage = closed.visited;
    for (int id = parent_id; id >= 0 && arena_[id].last >= 0; id = arena_[id].parent) {
      col.stops.push_back(arena_[id].last);
      col.start_times.push_back(arena_[id].start);
    }
    std::reverse(col.stops.begin(), col.stops.end());
    std::reverse(col.start_times.begin(), col.start_times.end());
    result_.routes.push_back(std::move(route));

    if (config_.mode == PricingConfig::Mode::improve &&
        static_cast<int>(result_.routes.size()) >= config_.max_routes) {
      done_ = true;
    }
  }

  int vehicle_;
  const DualValues& duals_;
  const PhaseSpec& phase_;
  const PricingConfig& config_;
  const Instance& instance_;

  std::vector<Label> arena_;
  std::vector<bool> alive_;
  std::vector<std::vector<int>> buckets_;
  std::vector<std::vector<int>> stored_;
  std::vector<std::unordered_map<std::size_t, std::vector<int>>> state_stored_;
  std::vector<bool> queued_;
  PricingResult result_;
  bool done_ = false;
};

}  // namespace

PricingResult price_vehicle(int vehicle, const DualValues& duals, const PhaseSpec& phase,
                            const PricingConfig& config, const Instance& instance) {
  PricingRun run(vehicle, duals, phase, config, instance);
  return run.run();
}

std::optional<Column> build_column(int vehicle, const std::vector<int>& stops,
                                   const Instance& instance) {
  const DualValues duals = zero_duals(instance);
  PhaseSpec phase{Phase::duration, 0, 0};
  Label label = initial_label(vehicle, duals, phase, instance);
  Column col;
  col.vehicle = vehicle;
  for (int stop : stops) {
    auto next = extend(label, stop, instance, duals, phase);
    if (!next) return std::nullopt;
    label = std::move(*next);
    col.stops.push_back(stop);
    col.start_times.push_back(label.start);
  }
  auto closed = extend(label, -1, instance, duals, phase);
  if (!closed) return std::nullopt;
  col.duration = closed->duration;
  col.cost = closed->cost;
  col.coverage = closed->visited;
  return col;
}

}  // namespace lexrouter
