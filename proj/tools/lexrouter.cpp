#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lexrouter/instance_io.hpp"
#include "lexrouter/oracle.hpp"
#include "lexrouter/report.hpp"

namespace fs = std::filesystem;
using namespace lexrouter;

namespace {

constexpr int kExitFailure = 2;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SolveOptions {
  std::string input;
  std::string method = "cg-s";
  std::string output;
  double time_limit = 300.0;
  int eta = 10;
  std::string relax = "on";
  std::string initial_pool = "singletons";
  std::uint64_t seed = 0;
  std::size_t label_cap = 1'000'000;
  bool emit_timings = false;

  RunConfig config() const {
    RunConfig base;
    base.time_limit = time_limit;
    base.eta = eta;
    base.relaxation = relax != "off";
    base.initial_pool = initial_pool == "none" ? RunConfig::InitialPool::none
                                               : RunConfig::InitialPool::singletons;
    base.seed = seed;
    base.label_cap = label_cap;
    return method_config(method, base);
  }
};

int run_gen(const std::string& config_path, std::uint64_t seed, bool seed_given,
            const std::string& out_path) {
  GeneratorConfig cfg;
  if (!config_path.empty()) cfg = parse_generator_config(read_file(config_path));
  if (seed_given) cfg.seed = seed;
  const Instance inst = generate_random(cfg);
  const std::string doc = serialize_instance(inst);
  if (out_path.empty()) {
    std::cout << doc;
  } else {
    write_file(out_path, doc);
    std::cout << "wrote " << out_path << " (" << inst.num_interventions() << " interventions, "
              << inst.num_vehicles() << " vehicles)\n";
  }
  return 0;
}

int run_standardize(const std::string& in_path, int vehicles, int ratio, std::uint64_t seed,
                    const std::string& out_path) {
  const Instance raw = load_instance(in_path);
  const Instance out = standardize(raw, vehicles, ratio, seed);
  const std::string doc = serialize_instance(out);
  if (out_path.empty()) {
    std::cout << doc;
  } else {
    write_file(out_path, doc);
    std::cout << "wrote " << out_path << " (" << out.num_interventions() << " interventions, "
              << out.num_vehicles() << " vehicles)\n";
  }
  return 0;
}

int run_solve(const SolveOptions& opt) {
  const Instance inst = load_instance(opt.input);
  auto [solution, stats] = solve(inst, opt.config());
  std::cout << "method " << opt.method << "  f1 " << solution.total_duration << "  f2 "
            << format_scaled_decimal(solution.total_cost, kMicroScale) << "  exact "
            << (stats.exact ? "yes" : "no") << "  time " << stats.wall_seconds << "s\n";
  for (const auto& phase : stats.phases) {
    std::cout << "  phase " << phase.phase << ": iterations " << phase.iterations << ", routes "
              << phase.routes_generated << ", u " << phase.lp_value << ", l "
              << phase.integer_value << (phase.exact ? "" : " (truncated)") << "\n";
  }
  if (!opt.output.empty()) {
    write_file(opt.output, solution_to_json(solution, stats, inst, opt.emit_timings));
    std::cout << "wrote " << opt.output << "\n";
  }
  return 0;
}

int run_oracle(const std::string& in_path, int max_interventions, int max_vehicles) {
  const Instance inst = load_instance(in_path);
  EnumerationBudget budget;
  budget.max_interventions = max_interventions;
  budget.max_vehicles = max_vehicles;
  const LexSolution best = brute_force_lex_optimum(inst, budget);
  std::cout << "optimal f1 " << best.total_duration << "  f2 "
            << format_scaled_decimal(best.total_cost, kMicroScale) << "\n";
  for (const auto& route : best.routes) {
    std::cout << "  " << inst.vehicles[route.vehicle].id << ":";
    for (std::size_t k = 0; k < route.stops.size(); ++k) {
      std::cout << " " << inst.interventions[route.stops[k]].id << "@" << route.start_times[k];
    }
    std::cout << "\n";
  }
  return 0;
}

int run_bench_cmd(const std::string& dir, const std::vector<std::string>& inputs,
                  const std::string& methods_arg, const SolveOptions& opt,
                  const std::string& report_path, const std::string& gaps_path, bool table) {
  std::vector<std::string> paths = inputs;
  if (!dir.empty()) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".json") paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw ParseError("bench: no instances found");

  std::vector<std::string> methods;
  std::stringstream ss(methods_arg);
  for (std::string part; std::getline(ss, part, ',');) {
    if (!part.empty()) methods.push_back(part);
  }

  RunConfig base;
  base.time_limit = opt.time_limit;
  base.eta = opt.eta;
  base.relaxation = opt.relax != "off";
  base.seed = opt.seed;
  base.label_cap = opt.label_cap;
  for (const auto& m : methods) method_config(m, base);  // validate names up front

  const auto records = run_bench(paths, methods, base);
  int failures = 0;
  for (const auto& rec : records) {
    if (rec.failed) {
      ++failures;
      std::cerr << rec.instance_id << " x " << rec.method << " failed: " << rec.error << "\n";
    }
  }
  if (!report_path.empty()) {
    const bool csv = fs::path(report_path).extension() == ".csv";
    write_file(report_path, csv ? bench_records_to_csv(records, opt.emit_timings)
                                : bench_records_to_json(records, opt.emit_timings));
    std::cout << "wrote " << report_path << " (" << records.size() << " records)\n";
  }
  const GapReport gaps = gap_report(records);
  if (!gaps_path.empty()) {
    write_file(gaps_path, gap_report_to_json(gaps));
    std::cout << "wrote " << gaps_path << "\n";
  }
  if (table) std::cout << render_gap_table(gaps);
  return failures == 0 ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lexrouter: lexicographic technician routing and scheduling solver"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  std::string gen_config, gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("--config", gen_config, "generator config JSON");
  auto* seed_opt = gen->add_option("--seed", gen_seed, "seed override");
  gen->add_option("--out", gen_out, "output instance path");

  // standardize
  auto* std_cmd = app.add_subcommand("standardize", "cut an instance to a 1:5 category shape");
  std::string std_in, std_out;
  int std_vehicles = 0, std_ratio = 5;
  std::uint64_t std_seed = 0;
  std_cmd->add_option("--in", std_in, "input instance")->required();
  std_cmd->add_option("--vehicles", std_vehicles, "target vehicle count")->required();
  std_cmd->add_option("--ratio", std_ratio, "interventions per vehicle");
  std_cmd->add_option("--seed", std_seed, "removal seed");
  std_cmd->add_option("--out", std_out, "output instance path");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance");
  SolveOptions opt;
  solve_cmd->add_option("--in", opt.input, "instance path")->required();
  solve_cmd->add_option("--method", opt.method, "compact-w | compact-s | cg-w | cg-s");
  solve_cmd->add_option("--time-limit", opt.time_limit, "seconds");
  solve_cmd->add_option("--eta", opt.eta, "routes per pricing call");
  solve_cmd->add_option("--relax", opt.relax, "on | off (dominance relaxation)");
  solve_cmd->add_option("--initial-pool", opt.initial_pool, "singletons | none");
  solve_cmd->add_option("--seed", opt.seed, "seed recorded in outputs");
  solve_cmd->add_option("--label-cap", opt.label_cap, "pricing label cap");
  solve_cmd->add_option("--out", opt.output, "solution JSON path");
  solve_cmd->add_flag("--emit-timings", opt.emit_timings,
                      "write wall times into files (breaks byte determinism)");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force lexicographic optimum");
  std::string oracle_in;
  int oracle_ivs = 8, oracle_vehicles = 3;
  oracle_cmd->add_option("--in", oracle_in, "instance path")->required();
  oracle_cmd->add_option("--max-interventions", oracle_ivs, "enumeration budget");
  oracle_cmd->add_option("--max-vehicles", oracle_vehicles, "enumeration budget");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run methods over an instance set");
  std::string bench_dir, bench_methods = "cg-w,cg-s", bench_report, bench_gaps;
  std::vector<std::string> bench_inputs;
  bool bench_table = false;
  SolveOptions bench_opt;
  bench_cmd->add_option("--dir", bench_dir, "directory of *.json instances");
  bench_cmd->add_option("--in", bench_inputs, "explicit instance paths");
  bench_cmd->add_option("--methods", bench_methods, "comma-separated method list");
  bench_cmd->add_option("--time-limit", bench_opt.time_limit, "seconds per record");
  bench_cmd->add_option("--eta", bench_opt.eta, "routes per pricing call");
  bench_cmd->add_option("--relax", bench_opt.relax, "on | off");
  bench_cmd->add_option("--seed", bench_opt.seed, "seed recorded in outputs");
  bench_cmd->add_option("--report", bench_report, "records output (.json or .csv)");
  bench_cmd->add_option("--gaps", bench_gaps, "gap report JSON path");
  bench_cmd->add_flag("--table", bench_table, "print the gap table");
  bench_cmd->add_flag("--emit-timings", bench_opt.emit_timings, "write wall times into files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(gen_config, gen_seed, seed_opt->count() > 0, gen_out);
    if (std_cmd->parsed()) return run_standardize(std_in, std_vehicles, std_ratio, std_seed, std_out);
    if (solve_cmd->parsed()) return run_solve(opt);
    if (oracle_cmd->parsed()) return run_oracle(oracle_in, oracle_ivs, oracle_vehicles);
    if (bench_cmd->parsed()) {
      return run_bench_cmd(bench_dir, bench_inputs, bench_methods, bench_opt, bench_report,
                           bench_gaps, bench_table);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
