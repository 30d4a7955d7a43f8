#include "lexrouter/compact.hpp"

#include <algorithm>
#include <cmath>

#include "lexrouter/pricing.hpp"

namespace lexrouter {

namespace {

int entity_node(const Instance& inst, int vehicle, int entity) {
  return entity < 0 ? inst.vehicles[vehicle].depot_node : inst.interventions[entity].node;
}

}  // namespace

CompactModel build_compact(const Instance& inst, const PhaseSpec& phase) {
  if (phase.phase == Phase::weighted && phase.hierarchy_weight <= 0) {
    throw ModelError("weighted compact model needs the hierarchy weight");
  }
  if (phase.phase == Phase::cost && phase.min_duration < 0) {
    throw ModelError("cost-phase compact model needs the duration floor");
  }

  CompactModel cm;
  cm.phase = phase;
  LinearModel& m = cm.model;
  m.sense = ObjSense::maximize;
  m.objective_granularity = phase.granularity(inst);

  const int I = inst.num_interventions();
  const int V = inst.num_vehicles();
  const bool cost_counts = phase.counts_cost();

  // Arc variables over each vehicle's own entity set.
  cm.entities.resize(V);
  cm.arc_var.resize(V);
  for (int v = 0; v < V; ++v) {
    auto& ents = cm.entities[v];
    ents.push_back(-1);
    for (int i : inst.vehicles[v].eligible) ents.push_back(i);
    const int nv = static_cast<int>(ents.size());
    cm.arc_var[v].assign(static_cast<std::size_t>(nv) * nv, -1);
    for (int a = 0; a < nv; ++a) {
      for (int b = 0; b < nv; ++b) {
        if (a == b) continue;
        double obj = 0.0;
        if (ents[a] >= 0) {
          const double d = inst.interventions[ents[a]].duration;
          obj += phase.phase == Phase::weighted
                     ? static_cast<double>(phase.hierarchy_weight) * d
                     : (phase.phase == Phase::duration ? d : 0.0);
        }
        if (cost_counts) {
          obj -= to_currency(inst.arc_cost(entity_node(inst, v, ents[a]),
                                           entity_node(inst, v, ents[b])));
          if (ents[a] < 0) obj -= to_currency(inst.vehicles[v].personnel_cost);
        }
        const std::string name = "x_" + inst.vehicles[v].id + "_" + std::to_string(ents[a]) +
                                 "_" + std::to_string(ents[b]);
        cm.arc_var[v][static_cast<std::size_t>(a) * nv + b] =
            m.add_variable(name, 0.0, 1.0, true, obj);
      }
    }
  }

  cm.u_var.resize(I);
  cm.z_var.assign(I, -1);
  for (int i = 0; i < I; ++i) {
    const auto& iv = inst.interventions[i];
    cm.u_var[i] = m.add_variable("u_" + iv.id, iv.window_start,
                                 static_cast<double>(iv.window_end - iv.duration), false, 0.0);
    if (!is_long(iv)) {
      cm.z_var[i] = m.add_variable("z_" + iv.id, 0.0, 1.0, true, 0.0);
    }
  }

  // Coverage: each intervention leaves at most once over all vehicles.
  for (int i = 0; i < I; ++i) {
    const int row = m.add_row("cover_" + inst.interventions[i].id, RowSense::le, 1.0);
    for (int v = 0; v < V; ++v) {
      const auto& ents = cm.entities[v];
      const int nv = static_cast<int>(ents.size());
      const auto a = std::find(ents.begin(), ents.end(), i);
      if (a == ents.end()) continue;
      const int ai = static_cast<int>(a - ents.begin());
      for (int b = 0; b < nv; ++b) {
        const int var = cm.arc_var[v][static_cast<std::size_t>(ai) * nv + b];
        if (var >= 0) m.add_coeff(row, var, 1.0);
      }
    }
  }

  // Flow conservation at every entity of every vehicle.
  for (int v = 0; v < V; ++v) {
    const auto& ents = cm.entities[v];
    const int nv = static_cast<int>(ents.size());
    for (int a = 0; a < nv; ++a) {
      const int row = m.add_row(
          "flow_" + inst.vehicles[v].id + "_" + std::to_string(ents[a]), RowSense::eq, 0.0);
      for (int b = 0; b < nv; ++b) {
        const int out = cm.arc_var[v][static_cast<std::size_t>(a) * nv + b];
        if (out >= 0) m.add_coeff(row, out, 1.0);
        const int in = cm.arc_var[v][static_cast<std::size_t>(b) * nv + a];
        if (in >= 0) m.add_coeff(row, in, -1.0);
      }
    }
    const int depart = m.add_row("depart_" + inst.vehicles[v].id, RowSense::le, 1.0);
    for (int b = 1; b < nv; ++b) {
      const int var = cm.arc_var[v][b];  // row 0 is the depot
      if (var >= 0) m.add_coeff(depart, var, 1.0);
    }
  }

  // Start-time chaining over shared-vehicle intervention pairs.
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < I; ++j) {
      if (i == j) continue;
      std::vector<int> arcs;
      for (int v = 0; v < V; ++v) {
        if (!inst.can_serve(v, i) || !inst.can_serve(v, j)) continue;
        const auto& ents = cm.entities[v];
        const int nv = static_cast<int>(ents.size());
        const int ai = static_cast<int>(std::find(ents.begin(), ents.end(), i) - ents.begin());
        const int bj = static_cast<int>(std::find(ents.begin(), ents.end(), j) - ents.begin());
        const int var = cm.arc_var[v][static_cast<std::size_t>(ai) * nv + bj];
        if (var >= 0) arcs.push_back(var);
      }
      if (arcs.empty()) continue;
      const auto& iv = inst.interventions[i];
      const int travel = inst.travel(iv.node, inst.interventions[j].node);
      const int row = m.add_row("chain_" + iv.id + "_" + inst.interventions[j].id, RowSense::le,
                                static_cast<double>(iv.window_end));
      m.add_coeff(row, cm.u_var[i], 1.0);
      m.add_coeff(row, cm.u_var[j], -1.0);
      const double big = iv.window_end + iv.duration + travel;
      for (int var : arcs) m.add_coeff(row, var, big);
    }
  }

  // First arc from the depot and the return before day end.
  for (int v = 0; v < V; ++v) {
    const auto& ents = cm.entities[v];
    const int nv = static_cast<int>(ents.size());
    for (int a = 1; a < nv; ++a) {
      const int i = ents[a];
      const int out_t = inst.travel(inst.vehicles[v].depot_node, inst.interventions[i].node);
      const int first = cm.arc_var[v][a];
      if (first >= 0 && out_t > 0) {
        const int row =
            m.add_row("first_" + inst.vehicles[v].id + "_" + inst.interventions[i].id,
                      RowSense::le, 0.0);
        m.add_coeff(row, first, static_cast<double>(out_t));
        m.add_coeff(row, cm.u_var[i], -1.0);
      }
      const int back = cm.arc_var[v][static_cast<std::size_t>(a) * nv];
      const int back_t = inst.travel(inst.interventions[i].node, inst.vehicles[v].depot_node);
      if (back >= 0) {
        const int row = m.add_row(
            "dayend_" + inst.vehicles[v].id + "_" + inst.interventions[i].id, RowSense::le,
            static_cast<double>(inst.day_end - inst.interventions[i].duration));
        m.add_coeff(row, cm.u_var[i], 1.0);
        m.add_coeff(row, back, static_cast<double>(back_t));
      }
    }
  }

  // Half-day linkage for short interventions.
  for (int i = 0; i < I; ++i) {
    if (cm.z_var[i] < 0) continue;
    const auto& iv = inst.interventions[i];
    const int am = m.add_row("halfday_am_" + iv.id, RowSense::le,
                             static_cast<double>(inst.midday - iv.duration));
    m.add_coeff(am, cm.u_var[i], 1.0);
    m.add_coeff(am, cm.z_var[i], -static_cast<double>(inst.day_end - inst.midday));
    const int pm = m.add_row("halfday_pm_" + iv.id, RowSense::le, 0.0);
    m.add_coeff(pm, cm.z_var[i], static_cast<double>(inst.midday));
    m.add_coeff(pm, cm.u_var[i], -1.0);
  }

  // Interval capacities per vehicle.
  for (int v = 0; v < V; ++v) {
    const auto& ents = cm.entities[v];
    const int nv = static_cast<int>(ents.size());
    for (int k = 0; k < inst.num_intervals(); ++k) {
      const int row = m.add_row("cap_" + inst.vehicles[v].id + "_" + inst.intervals[k].id,
                                RowSense::le, static_cast<double>(inst.vehicles[v].capacity[k]));
      bool any = false;
      for (int a = 1; a < nv; ++a) {
        const std::int64_t use = inst.interventions[ents[a]].resource_use[k];
        if (use == 0) continue;
        for (int b = 0; b < nv; ++b) {
          const int var = cm.arc_var[v][static_cast<std::size_t>(a) * nv + b];
          if (var >= 0) {
            m.add_coeff(row, var, static_cast<double>(use));
            any = true;
          }
        }
      }
      if (!any) m.rows.pop_back();
    }
  }

  // Duration floor of the sequential cost stage.
  if (phase.phase == Phase::cost) {
    const int row =
        m.add_row("min_duration", RowSense::ge, static_cast<double>(phase.min_duration));
    for (int v = 0; v < V; ++v) {
      const auto& ents = cm.entities[v];
      const int nv = static_cast<int>(ents.size());
      for (int a = 1; a < nv; ++a) {
        for (int b = 0; b < nv; ++b) {
          const int var = cm.arc_var[v][static_cast<std::size_t>(a) * nv + b];
          if (var >= 0) {
            m.add_coeff(row, var, static_cast<double>(inst.interventions[ents[a]].duration));
          }
        }
      }
    }
  }
  return cm;
}

LexSolution decode_compact(const SolveOutcome& outcome, const CompactModel& cm,
                           const Instance& inst) {
  if (outcome.status != SolveStatus::optimal && outcome.status != SolveStatus::feasible_limit) {
    throw ModelError(std::string("compact outcome not decodable: ") + to_string(outcome.status));
  }

  LexSolution solution;
  for (int v = 0; v < inst.num_vehicles(); ++v) {
    const auto& ents = cm.entities[v];
    const int nv = static_cast<int>(ents.size());
    std::vector<int> successor(nv, -1);
    int arcs_used = 0;
    for (int a = 0; a < nv; ++a) {
      for (int b = 0; b < nv; ++b) {
        const int var = cm.arc_var[v][static_cast<std::size_t>(a) * nv + b];
        if (var < 0) continue;
        const double x = outcome.primal[var];
        if (std::abs(x - std::round(x)) > kLpTolerance) {
          throw ModelError("fractional arc value in compact solution");
        }
        if (std::round(x) == 1.0) {
          if (successor[a] >= 0) throw ModelError("split route in compact solution");
          successor[a] = b;
          ++arcs_used;
        }
      }
    }
    if (successor[0] < 0) {
      if (arcs_used > 0) throw ModelError("arcs without a depot departure (subtour)");
      continue;
    }
    std::vector<int> stops;
    int walked = 0;
    for (int at = successor[0]; at != 0; at = successor[at]) {
      if (at < 0 || ++walked > nv) throw ModelError("broken arc chain in compact solution");
      stops.push_back(ents[at]);
    }
    if (static_cast<int>(stops.size()) + 1 != arcs_used) {
      throw ModelError("disconnected subtour in compact solution");
    }
    auto column = build_column(v, stops, inst);
    if (!column) throw ModelError("compact route fails schedule replay");
    solution.routes.push_back(std::move(*column));
  }

  recompute_objectives(solution, inst);
  const auto violations = validate_schedule(solution, inst);
  if (!violations.empty()) {
    throw ModelError("decoded compact schedule invalid: " + violations.front().detail);
  }
  solution.exact = outcome.status == SolveStatus::optimal;
  solution.status = to_string(outcome.status);
  return solution;
}

}  // namespace lexrouter
