#include "lexrouter/report.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lexrouter/instance_io.hpp"

namespace lexrouter {

using nlohmann::ordered_json;

RunConfig method_config(const std::string& method, const RunConfig& base) {
  RunConfig cfg = base;
  if (method == "compact-w") {
    cfg.formulation = RunConfig::Formulation::compact;
    cfg.mode = RunConfig::Mode::weighted;
  } else if (method == "compact-s") {
    cfg.formulation = RunConfig::Formulation::compact;
    cfg.mode = RunConfig::Mode::sequential;
  } else if (method == "cg-w") {
    cfg.formulation = RunConfig::Formulation::cg;
    cfg.mode = RunConfig::Mode::weighted;
  } else if (method == "cg-s") {
    cfg.formulation = RunConfig::Formulation::cg;
    cfg.mode = RunConfig::Mode::sequential;
  } else {
    throw ModelError("unknown method '" + method + "'");
  }
  return cfg;
}

std::vector<BenchRecord> run_bench(const std::vector<std::string>& instance_paths,
                                   const std::vector<std::string>& methods,
                                   const RunConfig& base_config) {
  if (methods.empty()) throw ModelError("bench needs at least one method");
  std::vector<BenchRecord> records;
  for (const auto& path : instance_paths) {
    const std::string id = std::filesystem::path(path).stem().string();
    std::optional<Instance> inst;
    std::string load_error;
    try {
      inst = load_instance(path);
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (const auto& method : methods) {
      BenchRecord rec;
      rec.instance_id = id;
      rec.method = method;
      if (!inst) {
        rec.failed = true;
        rec.error = load_error;
        records.push_back(std::move(rec));
        continue;
      }
      rec.interventions = inst->num_interventions();
      rec.vehicles = inst->num_vehicles();
      try {
        const RunConfig cfg = method_config(method, base_config);
        auto [solution, stats] = solve(*inst, cfg);
        rec.total_duration = solution.total_duration;
        rec.total_cost = solution.total_cost;
        rec.exact = stats.exact;
        rec.stats = std::move(stats);
        rec.wall_seconds = rec.stats.wall_seconds;
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::string instance_category(int interventions, int vehicles) {
  if (interventions == 20 && vehicles == 4) return "XS";
  if (interventions == 100 && vehicles == 20) return "S";
  if (interventions == 150 && vehicles == 30) return "M";
  if (interventions == 200 && vehicles == 40) return "L";
  return "other";
}

GapReport gap_report(const std::vector<BenchRecord>& records) {
  // Group by instance; every method must appear for every instance.
  std::map<std::string, std::vector<const BenchRecord*>> by_instance;
  std::vector<std::string> methods;
  for (const auto& rec : records) {
    by_instance[rec.instance_id].push_back(&rec);
    if (std::find(methods.begin(), methods.end(), rec.method) == methods.end()) {
      methods.push_back(rec.method);
    }
  }
  for (const auto& [id, recs] : by_instance) {
    if (recs.size() != methods.size()) {
      throw ModelError("bench records are not a full instance x method grid at " + id);
    }
  }

  struct Accumulator {
    int instances = 0;
    std::map<std::string, int> best_f1;
    std::map<std::string, int> best_f2;
    std::map<std::string, double> f1_gap_sum;
    std::map<std::string, double> f2_gap_sum;
    std::map<std::string, int> f2_gap_count;
  };
  std::map<std::string, Accumulator> by_category;

  for (const auto& [id, recs] : by_instance) {
    (void)id;
    Accumulator& acc = by_category[instance_category(recs.front()->interventions,
                                                     recs.front()->vehicles)];
    acc.instances += 1;

    std::int64_t best_duration = 0;
    bool any_ok = false;
    for (const auto* rec : recs) {
      if (rec->failed) continue;
      best_duration = any_ok ? std::max(best_duration, rec->total_duration) : rec->total_duration;
      any_ok = true;
    }
    if (!any_ok) continue;

    Micro best_cost = 0;
    bool cost_seen = false;
    for (const auto* rec : recs) {
      if (rec->failed || rec->total_duration != best_duration) continue;
      best_cost = cost_seen ? std::min(best_cost, rec->total_cost) : rec->total_cost;
      cost_seen = true;
    }

    for (const auto* rec : recs) {
      if (rec->failed) {
        acc.f1_gap_sum[rec->method] += 100.0;
        continue;
      }
      const double f1_gap =
          best_duration == 0
              ? 0.0
              : 100.0 * static_cast<double>(best_duration - rec->total_duration) /
                    static_cast<double>(best_duration);
      acc.f1_gap_sum[rec->method] += f1_gap;
      if (rec->total_duration == best_duration) {
        acc.best_f1[rec->method] += 1;
        const double f2_gap =
            best_cost == 0 ? 0.0
                           : 100.0 * static_cast<double>(rec->total_cost - best_cost) /
                                 static_cast<double>(best_cost);
        acc.f2_gap_sum[rec->method] += f2_gap;
        acc.f2_gap_count[rec->method] += 1;
        if (rec->total_cost == best_cost) acc.best_f2[rec->method] += 1;
      }
    }
  }

  GapReport report;
  for (auto& [category, acc] : by_category) {
    GapCategory cat;
    cat.category = category;
    cat.instances = acc.instances;
    for (const auto& method : methods) {
      GapRow row;
      row.method = method;
      row.best_duration_count = acc.best_f1[method];
      row.best_cost_count = acc.best_f2[method];
      row.mean_duration_gap = acc.instances > 0 ? acc.f1_gap_sum[method] / acc.instances : 0.0;
      if (acc.f2_gap_count[method] > 0) {
        row.mean_cost_gap = acc.f2_gap_sum[method] / acc.f2_gap_count[method];
      }
      cat.rows.push_back(std::move(row));
    }
    report.categories.push_back(std::move(cat));
  }
  return report;
}

namespace {

ordered_json stats_to_json(const RunStats& stats, bool emit_timings) {
  ordered_json phases = ordered_json::array();
  for (const auto& ps : stats.phases) {
    phases.push_back({{"phase", ps.phase},
                      {"iterations", ps.iterations},
                      {"routes_generated", ps.routes_generated},
                      {"closure_routes", ps.closure_routes},
                      {"lp_value", ps.lp_value},
                      {"pre_closure_integer_value", ps.pre_closure_integer_value},
                      {"integer_value", ps.integer_value},
                      {"levels", ps.level_trajectory},
                      {"exact", ps.exact},
                      {"wall_seconds", emit_timings ? ps.wall_seconds : 0.0}});
  }
  return {{"exact", stats.exact},
          {"wall_seconds", emit_timings ? stats.wall_seconds : 0.0},
          {"phases", std::move(phases)}};
}

}  // namespace

std::string bench_records_to_json(const std::vector<BenchRecord>& records, bool emit_timings) {
  ordered_json arr = ordered_json::array();
  for (const auto& rec : records) {
    ordered_json j = {{"instance", rec.instance_id},
                      {"method", rec.method},
                      {"f1", rec.total_duration},
                      {"f2", format_scaled_decimal(rec.total_cost, kMicroScale)},
                      {"exact", rec.exact},
                      {"failed", rec.failed},
                      {"wall_seconds", emit_timings ? rec.wall_seconds : 0.0}};
    if (rec.failed) j["error"] = rec.error;
    j["stats"] = stats_to_json(rec.stats, emit_timings);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string bench_records_to_csv(const std::vector<BenchRecord>& records, bool emit_timings) {
  std::ostringstream out;
  out << "instance,method,f1,f2,exact,failed,wall_seconds,iterations,routes_generated\n";
  for (const auto& rec : records) {
    int iterations = 0;
    int routes = 0;
    for (const auto& ps : rec.stats.phases) {
      iterations += ps.iterations;
      routes += ps.routes_generated;
    }
    out << rec.instance_id << ',' << rec.method << ',' << rec.total_duration << ','
        << format_scaled_decimal(rec.total_cost, kMicroScale) << ',' << (rec.exact ? 1 : 0) << ','
        << (rec.failed ? 1 : 0) << ',' << (emit_timings ? rec.wall_seconds : 0.0) << ','
        << iterations << ',' << routes << '\n';
  }
  return out.str();
}

std::string gap_report_to_json(const GapReport& report) {
  ordered_json arr = ordered_json::array();
  for (const auto& cat : report.categories) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : cat.rows) {
      ordered_json j = {{"method", row.method},
                        {"best", {row.best_duration_count, row.best_cost_count}},
                        {"mean_duration_gap", row.mean_duration_gap}};
      if (row.mean_cost_gap.has_value()) {
        j["mean_cost_gap"] = *row.mean_cost_gap;
      } else {
        j["mean_cost_gap"] = nullptr;
      }
      rows.push_back(std::move(j));
    }
    arr.push_back({{"category", cat.category},
                   {"instances", cat.instances},
                   {"methods", std::move(rows)}});
  }
  return arr.dump(2) + "\n";
}

std::string render_gap_table(const GapReport& report) {
  std::ostringstream out;
  for (const auto& cat : report.categories) {
    out << "category " << cat.category << " (" << cat.instances << " instances)\n";
    out << "  method       best(a,b)   f1-gap%   f2-gap%\n";
    for (const auto& row : cat.rows) {
      char buf[128];
      if (row.mean_cost_gap.has_value()) {
        std::snprintf(buf, sizeof buf, "  %-11s (%3d,%3d)  %8.2f  %8.2f\n", row.method.c_str(),
                      row.best_duration_count, row.best_cost_count, row.mean_duration_gap,
                      *row.mean_cost_gap);
      } else {
        std::snprintf(buf, sizeof buf, "  %-11s (%3d,%3d)  %8.2f        --\n", row.method.c_str(),
                      row.best_duration_count, row.best_cost_count, row.mean_duration_gap);
      }
      out << buf;
    }
  }
  return out.str();
}

std::string solution_to_json(const LexSolution& solution, const RunStats& stats,
                             const Instance& instance, bool emit_timings) {
  ordered_json routes = ordered_json::array();
  for (const auto& route : solution.routes) {
    const auto& veh = instance.vehicles[route.vehicle];
    ordered_json stops = ordered_json::array();
    stops.push_back({{"node", instance.node_ids[veh.depot_node]},
                     {"arrival", 0},
                     {"start", 0},
                     {"end", 0}});
    int prev = -1;
    int prev_end = 0;
    for (std::size_t k = 0; k < route.stops.size(); ++k) {
      const int i = route.stops[k];
      const auto& iv = instance.interventions[i];
      const int arrival = prev_end + instance.travel_entities(route.vehicle, prev, i);
      stops.push_back({{"node", instance.node_ids[iv.node]},
                       {"intervention", iv.id},
                       {"arrival", arrival},
                       {"start", route.start_times[k]},
                       {"end", route.start_times[k] + iv.duration}});
      prev = i;
      prev_end = route.start_times[k] + iv.duration;
    }
    const int back = prev_end + instance.travel_entities(route.vehicle, prev, -1);
    stops.push_back({{"node", instance.node_ids[veh.depot_node]},
                     {"arrival", back},
                     {"start", back},
                     {"end", back}});
    routes.push_back({{"vehicle", veh.id}, {"stops", std::move(stops)}});
  }

  ordered_json doc = {
      {"objectives",
       {{"f1", solution.total_duration},
        {"f2", format_scaled_decimal(solution.total_cost, kMicroScale)}}},
      {"exact", solution.exact},
      {"status", solution.status},
      {"routes", std::move(routes)},
      {"stats", stats_to_json(stats, emit_timings)}};
  return doc.dump(2) + "\n";
}

}  // namespace lexrouter
