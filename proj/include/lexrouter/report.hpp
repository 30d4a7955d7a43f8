#pragma once

#include <optional>

#include "lexrouter/driver.hpp"

namespace lexrouter {

// The four method identifiers accepted by the CLI and the bench harness.
inline constexpr const char* kMethodNames[] = {"compact-w", "compact-s", "cg-w", "cg-s"};

// Maps a method id onto (mode, formulation); throws on unknown names.
RunConfig method_config(const std::string& method, const RunConfig& base);

struct BenchRecord {
  std::string instance_id;
  std::string method;
  int interventions = 0;
  int vehicles = 0;
  std::int64_t total_duration = 0;  // f1, recomputed from the schedule
  Micro total_cost = 0;             // f2
  bool exact = false;
  RunStats stats;
  double wall_seconds = 0.0;
  bool failed = false;
  std::string error;
};

// One record per (instance, method); failures are recorded, not fatal.
std::vector<BenchRecord> run_bench(const std::vector<std::string>& instance_paths,
                                   const std::vector<std::string>& methods,
                                   const RunConfig& base_config);

struct GapRow {
  std::string method;
  int best_duration_count = 0;  // instances attaining the best f1
  int best_cost_count = 0;      // of those, instances also attaining the best f2
  double mean_duration_gap = 0.0;
  std::optional<double> mean_cost_gap;  // absent when f1 was never best
};

struct GapCategory {
  std::string category;  // XS, S, M, L or other
  int instances = 0;
  std::vector<GapRow> rows;
};

struct GapReport {
  std::vector<GapCategory> categories;
};

// Best-solution tuples and mean gaps relative to the best value found per
// instance; the cost gap only counts methods that attain the best duration
// (mirrored by "--" in the rendered table). Zero best values make the gap 0.
GapReport gap_report(const std::vector<BenchRecord>& records);

// XS / S / M / L by exact intervention//vehicle counts, else "other".
std::string instance_category(int interventions, int vehicles);

// Serialization. Wall-clock fields are zeroed unless emit_timings is set, so
// reruns with one seed produce identical bytes.
std::string bench_records_to_json(const std::vector<BenchRecord>& records, bool emit_timings);
std::string bench_records_to_csv(const std::vector<BenchRecord>& records, bool emit_timings);
std::string gap_report_to_json(const GapReport& report);
std::string render_gap_table(const GapReport& report);

// Solution document for `solve --out`; schema documented in the README.
std::string solution_to_json(const LexSolution& solution, const RunStats& stats,
                             const Instance& instance, bool emit_timings);

}  // namespace lexrouter
