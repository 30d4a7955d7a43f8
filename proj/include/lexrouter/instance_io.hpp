#pragma once

#include <cstdint>
#include <string>

#include "lexrouter/model.hpp"

namespace lexrouter {

// Document problems. Schema errors are structural (missing/mistyped fields);
// semantic errors are invariant breaches. Messages name the offending path.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SchemaError : public ParseError {
 public:
  using ParseError::ParseError;
};
class SemanticError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Parses and fully validates an instance document. Triangle-inequality
// violations on travel time are a hard load error, as is a positive distance
// over a zero travel time.
Instance parse_instance(const std::string& json_text);
Instance load_instance(const std::string& path);

// Stable serialization: fixed key order, scaled decimals re-emitted as
// minimal strings. parse(serialize(x)) is semantically identical to x.
std::string serialize_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

struct GeneratorConfig {
  int n_interventions = 20;
  int n_vehicles = 4;
  int midday = 240;
  int day_end = 480;
  double bbox_km = 30.0;          // nodes are placed uniformly in this square
  double long_fraction = 0.3;     // share of interventions at or over the long threshold
  double window_tightness = 0.5;  // 0 = every window is [0, day_end]
  int resource_intervals = 3;     // 0, 1 (full day) or 3 (day + both halves)
  double capacity_factor = 0.85;  // interval capacity as a share of its span
  double eligibility = 1.0;       // per (vehicle, intervention) admission probability
  std::uint64_t seed = 0;
};

GeneratorConfig parse_generator_config(const std::string& json_text);

// Deterministic per seed; the emitted instance passes parse_instance.
Instance generate_random(const GeneratorConfig& config);

// Cuts an instance down to exactly target_vehicles vehicles and
// ratio * target_vehicles interventions: vehicles are removed first, then
// interventions, both uniformly at random under the seed. Surviving entries
// are untouched apart from re-indexed eligibility lists.
Instance standardize(const Instance& raw, int target_vehicles, int ratio, std::uint64_t seed);

}  // namespace lexrouter
