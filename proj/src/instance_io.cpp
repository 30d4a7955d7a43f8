#include "lexrouter/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace lexrouter {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(path + "." + key + ": missing field");
  }
  return obj.at(key);
}

int require_int(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer()) throw SchemaError(path + "." + key + ": expected integer");
  return v.get<int>();
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key + ": expected string");
  return v.get<std::string>();
}

std::int64_t require_decimal(const json& obj, const char* key, const std::string& path,
                             std::int64_t scale) {
  const std::string text = require_string(obj, key, path);
  try {
    return parse_scaled_decimal(text, scale);
  } catch (const NumericError& e) {
    throw SchemaError(path + "." + key + ": " + e.what());
  }
}

void validate_instance(const Instance& inst) {
  const int n = inst.num_nodes();
  if (n == 0) throw SemanticError("nodes: empty");
  if (!(0 < inst.midday && inst.midday < inst.day_end)) {
    throw SemanticError("day: requires 0 < md < ed");
  }
  if (inst.distance_tariff < 0) throw SemanticError("day.delta: negative");

  for (int a = 0; a < n; ++a) {
    if (inst.travel(a, a) != 0) {
      throw SemanticError("travel.time[" + std::to_string(a) + "][" + std::to_string(a) +
                          "]: nonzero diagonal");
    }
    if (inst.distance(a, a) != 0) {
      throw SemanticError("travel.dist[" + std::to_string(a) + "][" + std::to_string(a) +
                          "]: nonzero diagonal");
    }
    for (int b = 0; b < n; ++b) {
      if (inst.travel(a, b) < 0 || inst.distance(a, b) < 0) {
        throw SemanticError("travel[" + std::to_string(a) + "][" + std::to_string(b) +
                            "]: negative entry");
      }
      if (inst.travel(a, b) == 0 && inst.distance(a, b) > 0) {
        throw SemanticError("travel[" + std::to_string(a) + "][" + std::to_string(b) +
                            "]: positive distance over zero travel time");
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int h = 0; h < n; ++h) {
      const int ah = inst.travel(a, h);
      for (int b = 0; b < n; ++b) {
        if (ah + inst.travel(h, b) < inst.travel(a, b)) {
          throw SemanticError("travel.time: triangle inequality violated at (" +
                              std::to_string(a) + ", " + std::to_string(h) + ", " +
                              std::to_string(b) + ")");
        }
      }
    }
  }

  for (std::size_t i = 0; i < inst.interventions.size(); ++i) {
    const auto& iv = inst.interventions[i];
    const std::string path = "interventions[" + std::to_string(i) + "]";
    if (iv.node < 0 || iv.node >= n) throw SemanticError(path + ".node: unknown node");
    if (inst.node_kinds[iv.node] != NodeKind::intervention) {
      throw SemanticError(path + ".node: not an intervention node");
    }
    if (iv.duration < 1) throw SemanticError(path + ".d: must be at least 1");
    if (iv.window_start < 0) throw SemanticError(path + ".s: negative");
    if (iv.window_start + iv.duration > iv.window_end) {
      throw SemanticError(path + ".window: s + d exceeds e");
    }
    if (iv.resource_use.size() != inst.intervals.size()) {
      throw SemanticError(path + ".q: wrong interval count");
    }
    for (std::size_t k = 0; k < iv.resource_use.size(); ++k) {
      if (iv.resource_use[k] < 0) throw SemanticError(path + ".q: negative consumption");
      if (iv.resource_use[k] > 0) {
        const auto& span = inst.intervals[k];
        if (!(span.start <= iv.window_start && iv.window_end <= span.end)) {
          throw SemanticError(path + ".q[" + span.id +
                              "]: positive consumption outside the window's interval");
        }
      }
    }
  }

  for (std::size_t v = 0; v < inst.vehicles.size(); ++v) {
    const auto& veh = inst.vehicles[v];
    const std::string path = "vehicles[" + std::to_string(v) + "]";
    if (veh.depot_node < 0 || veh.depot_node >= n) {
      throw SemanticError(path + ".depot_node: unknown node");
    }
    if (inst.node_kinds[veh.depot_node] != NodeKind::depot) {
      throw SemanticError(path + ".depot_node: not a depot node");
    }
    if (veh.personnel_cost < 0) throw SemanticError(path + ".g: negative");
    if (veh.capacity.size() != inst.intervals.size()) {
      throw SemanticError(path + ".m: wrong interval count");
    }
    for (auto c : veh.capacity) {
      if (c < 0) throw SemanticError(path + ".m: negative capacity");
    }
    for (int e : veh.eligible) {
      if (e < 0 || e >= inst.num_interventions()) {
        throw SemanticError(path + ".eligible: unknown intervention");
      }
    }
  }
  for (const auto& span : inst.intervals) {
    if (span.start < 0 || span.start >= span.end) {
      throw SemanticError("intervals[" + span.id + "]: bad span");
    }
  }
}

template <typename T>
void check_unique_ids(const std::vector<T>& items, const char* what) {
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!seen.insert({items[i].id, static_cast<int>(i)}).second) {
      throw SemanticError(std::string(what) + "[" + std::to_string(i) + "].id: duplicate '" +
                          items[i].id + "'");
    }
  }
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("document: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("document: expected object");

  Instance inst;
  const json& day = require(doc, "day", "document");
  inst.midday = require_int(day, "md", "day");
  inst.day_end = require_int(day, "ed", "day");
  inst.distance_tariff = require_decimal(day, "delta", "day", kMilliScale);

  std::unordered_map<std::string, int> interval_index;
  if (doc.contains("intervals")) {
    const json& arr = doc.at("intervals");
    if (!arr.is_array()) throw SchemaError("intervals: expected array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string path = "intervals[" + std::to_string(k) + "]";
      ResourceInterval span;
      span.id = require_string(arr[k], "id", path);
      span.start = require_int(arr[k], "start", path);
      span.end = require_int(arr[k], "end", path);
      if (!interval_index.insert({span.id, static_cast<int>(k)}).second) {
        throw SemanticError(path + ".id: duplicate '" + span.id + "'");
      }
      inst.intervals.push_back(std::move(span));
    }
  }

  const json& nodes = require(doc, "nodes", "document");
  if (!nodes.is_array() || nodes.empty()) throw SchemaError("nodes: expected non-empty array");
  std::unordered_map<std::string, int> node_index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "nodes[" + std::to_string(i) + "]";
    const std::string id = require_string(nodes[i], "id", path);
    const std::string kind = require_string(nodes[i], "kind", path);
    if (kind != "depot" && kind != "intervention") {
      throw SchemaError(path + ".kind: expected 'depot' or 'intervention'");
    }
    if (!node_index.insert({id, static_cast<int>(i)}).second) {
      throw SemanticError(path + ".id: duplicate '" + id + "'");
    }
    inst.node_ids.push_back(id);
    inst.node_kinds.push_back(kind == "depot" ? NodeKind::depot : NodeKind::intervention);
  }
  const int n = inst.num_nodes();

  const json& travel = require(doc, "travel", "document");
  const json& time_m = require(travel, "time", "travel");
  const json& dist_m = require(travel, "dist", "travel");
  if (!time_m.is_array() || static_cast<int>(time_m.size()) != n) {
    throw SchemaError("travel.time: expected " + std::to_string(n) + " rows");
  }
  if (!dist_m.is_array() || static_cast<int>(dist_m.size()) != n) {
    throw SchemaError("travel.dist: expected " + std::to_string(n) + " rows");
  }
  inst.travel_time.resize(static_cast<std::size_t>(n) * n);
  inst.travel_dist.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    if (!time_m[a].is_array() || static_cast<int>(time_m[a].size()) != n ||
        !dist_m[a].is_array() || static_cast<int>(dist_m[a].size()) != n) {
      throw SchemaError("travel: row " + std::to_string(a) + " has wrong length");
    }
    for (int b = 0; b < n; ++b) {
      const json& t = time_m[a][b];
      if (!t.is_number_integer()) {
        throw SchemaError("travel.time[" + std::to_string(a) + "][" + std::to_string(b) +
                          "]: expected integer minutes");
      }
      inst.travel_time[static_cast<std::size_t>(a) * n + b] = t.get<int>();
      const json& d = dist_m[a][b];
      if (!d.is_string()) {
        throw SchemaError("travel.dist[" + std::to_string(a) + "][" + std::to_string(b) +
                          "]: expected decimal string");
      }
      try {
        inst.travel_dist[static_cast<std::size_t>(a) * n + b] =
            parse_scaled_decimal(d.get<std::string>(), kMilliScale);
      } catch (const NumericError& e) {
        throw SchemaError("travel.dist[" + std::to_string(a) + "][" + std::to_string(b) + "]: " +
                          e.what());
      }
    }
  }

  const json& ivs = require(doc, "interventions", "document");
  if (!ivs.is_array()) throw SchemaError("interventions: expected array");
  std::unordered_map<std::string, int> iv_index;
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    const std::string path = "interventions[" + std::to_string(i) + "]";
    Intervention iv;
    iv.id = require_string(ivs[i], "id", path);
    const std::string node_id = require_string(ivs[i], "node", path);
    const auto it = node_index.find(node_id);
    if (it == node_index.end()) throw SemanticError(path + ".node: unknown node '" + node_id + "'");
    iv.node = it->second;
    iv.duration = require_int(ivs[i], "d", path);
    iv.window_start = require_int(ivs[i], "s", path);
    iv.window_end = require_int(ivs[i], "e", path);
    iv.resource_use.assign(inst.intervals.size(), 0);
    const json& q = require(ivs[i], "q", path);
    if (!q.is_object()) throw SchemaError(path + ".q: expected object");
    for (const auto& [key, value] : q.items()) {
      const auto kit = interval_index.find(key);
      if (kit == interval_index.end()) {
        throw SemanticError(path + ".q: unknown interval '" + key + "'");
      }
      if (!value.is_number_integer()) throw SchemaError(path + ".q." + key + ": expected integer");
      iv.resource_use[kit->second] = value.get<std::int64_t>();
    }
    iv_index[iv.id] = static_cast<int>(i);
    inst.interventions.push_back(std::move(iv));
  }
  check_unique_ids(inst.interventions, "interventions");

  const json& vehicles = require(doc, "vehicles", "document");
  if (!vehicles.is_array()) throw SchemaError("vehicles: expected array");
  for (std::size_t v = 0; v < vehicles.size(); ++v) {
    const std::string path = "vehicles[" + std::to_string(v) + "]";
    Vehicle veh;
    veh.id = require_string(vehicles[v], "id", path);
    const std::string depot_id = require_string(vehicles[v], "depot_node", path);
    const auto it = node_index.find(depot_id);
    if (it == node_index.end()) {
      throw SemanticError(path + ".depot_node: unknown node '" + depot_id + "'");
    }
    veh.depot_node = it->second;
    veh.personnel_cost = require_decimal(vehicles[v], "g", path, kMicroScale);
    veh.capacity.assign(inst.intervals.size(), 0);
    const json& caps = require(vehicles[v], "m", path);
    if (!caps.is_object()) throw SchemaError(path + ".m: expected object");
    for (const auto& [key, value] : caps.items()) {
      const auto kit = interval_index.find(key);
      if (kit == interval_index.end()) {
        throw SemanticError(path + ".m: unknown interval '" + key + "'");
      }
      if (!value.is_number_integer()) throw SchemaError(path + ".m." + key + ": expected integer");
      veh.capacity[kit->second] = value.get<std::int64_t>();
    }
    const json& elig = require(vehicles[v], "eligible", path);
    if (!elig.is_array()) throw SchemaError(path + ".eligible: expected array");
    for (const auto& e : elig) {
      if (!e.is_string()) throw SchemaError(path + ".eligible: expected intervention ids");
      const auto eit = iv_index.find(e.get<std::string>());
      if (eit == iv_index.end()) {
        throw SemanticError(path + ".eligible: unknown intervention '" + e.get<std::string>() +
                            "'");
      }
      veh.eligible.push_back(eit->second);
    }
    inst.vehicles.push_back(std::move(veh));
  }
  check_unique_ids(inst.vehicles, "vehicles");

  if (doc.contains("meta")) {
    const json& meta = doc.at("meta");
    if (meta.contains("source") && meta.at("source").is_string()) {
      inst.meta.source = meta.at("source").get<std::string>();
    }
    if (meta.contains("original_interventions") && meta.at("original_interventions").is_number()) {
      inst.meta.original_interventions = meta.at("original_interventions").get<int>();
    }
    if (meta.contains("original_vehicles") && meta.at("original_vehicles").is_number()) {
      inst.meta.original_vehicles = meta.at("original_vehicles").get<int>();
    }
    if (meta.contains("note") && meta.at("note").is_string()) {
      inst.meta.note = meta.at("note").get<std::string>();
    }
  }

  inst.finalize();
  validate_instance(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string serialize_instance(const Instance& inst) {
  ordered_json doc;
  doc["day"] = {{"md", inst.midday},
                {"ed", inst.day_end},
                {"delta", format_scaled_decimal(inst.distance_tariff, kMilliScale)}};
  doc["intervals"] = ordered_json::array();
  for (const auto& span : inst.intervals) {
    doc["intervals"].push_back({{"id", span.id}, {"start", span.start}, {"end", span.end}});
  }
  doc["nodes"] = ordered_json::array();
  for (int i = 0; i < inst.num_nodes(); ++i) {
    doc["nodes"].push_back(
        {{"id", inst.node_ids[i]},
         {"kind", inst.node_kinds[i] == NodeKind::depot ? "depot" : "intervention"}});
  }
  ordered_json time_rows = ordered_json::array();
  ordered_json dist_rows = ordered_json::array();
  const int n = inst.num_nodes();
  for (int a = 0; a < n; ++a) {
    ordered_json trow = ordered_json::array();
    ordered_json drow = ordered_json::array();
    for (int b = 0; b < n; ++b) {
      trow.push_back(inst.travel(a, b));
      drow.push_back(format_scaled_decimal(inst.distance(a, b), kMilliScale));
    }
    time_rows.push_back(std::move(trow));
    dist_rows.push_back(std::move(drow));
  }
  doc["travel"] = {{"time", std::move(time_rows)}, {"dist", std::move(dist_rows)}};

  doc["interventions"] = ordered_json::array();
  for (const auto& iv : inst.interventions) {
    ordered_json q = ordered_json::object();
    for (std::size_t k = 0; k < iv.resource_use.size(); ++k) {
      if (iv.resource_use[k] != 0) q[inst.intervals[k].id] = iv.resource_use[k];
    }
    doc["interventions"].push_back({{"id", iv.id},
                                    {"node", inst.node_ids[iv.node]},
                                    {"d", iv.duration},
                                    {"s", iv.window_start},
                                    {"e", iv.window_end},
                                    {"q", std::move(q)}});
  }
  doc["vehicles"] = ordered_json::array();
  for (const auto& veh : inst.vehicles) {
    ordered_json caps = ordered_json::object();
    for (std::size_t k = 0; k < veh.capacity.size(); ++k) {
      if (veh.capacity[k] != 0) caps[inst.intervals[k].id] = veh.capacity[k];
    }
    ordered_json elig = ordered_json::array();
    for (int e : veh.eligible) elig.push_back(inst.interventions[e].id);
    doc["vehicles"].push_back({{"id", veh.id},
                               {"depot_node", inst.node_ids[veh.depot_node]},
                               {"g", format_scaled_decimal(veh.personnel_cost, kMicroScale)},
                               {"m", std::move(caps)},
                               {"eligible", std::move(elig)}});
  }
  if (!inst.meta.source.empty() || inst.meta.original_interventions >= 0 ||
      !inst.meta.note.empty()) {
    ordered_json meta = ordered_json::object();
    if (!inst.meta.source.empty()) meta["source"] = inst.meta.source;
    if (inst.meta.original_interventions >= 0) {
      meta["original_interventions"] = inst.meta.original_interventions;
      meta["original_vehicles"] = inst.meta.original_vehicles;
    }
    if (!inst.meta.note.empty()) meta["note"] = inst.meta.note;
    doc["meta"] = std::move(meta);
  }
  return doc.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << serialize_instance(inst);
}

GeneratorConfig parse_generator_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
  GeneratorConfig cfg;
  auto get_int = [&](const char* key, int fallback) {
    return doc.contains(key) ? doc.at(key).get<int>() : fallback;
  };
  auto get_double = [&](const char* key, double fallback) {
    return doc.contains(key) ? doc.at(key).get<double>() : fallback;
  };
  cfg.n_interventions = get_int("n_interventions", cfg.n_interventions);
  cfg.n_vehicles = get_int("n_vehicles", cfg.n_vehicles);
  cfg.midday = get_int("midday", cfg.midday);
  cfg.day_end = get_int("day_end", cfg.day_end);
  cfg.bbox_km = get_double("bbox_km", cfg.bbox_km);
  cfg.long_fraction = get_double("long_fraction", cfg.long_fraction);
  cfg.window_tightness = get_double("window_tightness", cfg.window_tightness);
  cfg.resource_intervals = get_int("resource_intervals", cfg.resource_intervals);
  cfg.capacity_factor = get_double("capacity_factor", cfg.capacity_factor);
  cfg.eligibility = get_double("eligibility", cfg.eligibility);
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  if (cfg.n_interventions < 1 || cfg.n_vehicles < 1) {
    throw SemanticError("config: n_interventions and n_vehicles must be at least 1");
  }
  return cfg;
}

Instance generate_random(const GeneratorConfig& cfg) {
  Rng rng(cfg.seed);
  Instance inst;
  inst.midday = cfg.midday;
  inst.day_end = cfg.day_end;
  inst.distance_tariff = rng.range(3, 6) * 100;  // 0.3 .. 0.6 per km

  switch (cfg.resource_intervals) {
    case 0:
      break;
    case 1:
      inst.intervals.push_back({"k_day", 0, cfg.day_end});
      break;
    default:
      inst.intervals.push_back({"k_day", 0, cfg.day_end});
      inst.intervals.push_back({"k_am", 0, cfg.midday});
      inst.intervals.push_back({"k_pm", cfg.midday, cfg.day_end});
      break;
  }

  // Node coordinates on a 0.1 km grid keep distances well quantized.
  const int grid = std::max(1, static_cast<int>(cfg.bbox_km * 10));
  std::vector<std::pair<int, int>> coords;
  const int total_nodes = cfg.n_vehicles + cfg.n_interventions;
  for (int i = 0; i < total_nodes; ++i) {
    coords.push_back(
        {static_cast<int>(rng.below(grid + 1)), static_cast<int>(rng.below(grid + 1))});
  }
  for (int v = 0; v < cfg.n_vehicles; ++v) {
    inst.node_ids.push_back("n_depot" + std::to_string(v));
    inst.node_kinds.push_back(NodeKind::depot);
  }
  for (int i = 0; i < cfg.n_interventions; ++i) {
    inst.node_ids.push_back("n_iv" + std::to_string(i));
    inst.node_kinds.push_back(NodeKind::intervention);
  }
  const int n = inst.num_nodes();
  inst.travel_time.assign(static_cast<std::size_t>(n) * n, 0);
  inst.travel_dist.assign(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double dx = (coords[a].first - coords[b].first) / 10.0;
      const double dy = (coords[a].second - coords[b].second) / 10.0;
      const double km = std::sqrt(dx * dx + dy * dy);
      // Rounding travel time up preserves the triangle inequality of the
      // Euclidean metric; distances are snapped to 0.1 km.
      inst.travel_time[static_cast<std::size_t>(a) * n + b] =
          static_cast<int>(std::ceil(km * 1.2 - 1e-9));
      inst.travel_dist[static_cast<std::size_t>(a) * n + b] =
          static_cast<Milli>(std::llround(km * 10.0)) * 100;
    }
  }

  const std::vector<int> short_durations = {15, 30, 45, 60, 75, 90, 105};
  const std::vector<int> long_durations = {120, 150, 180, 210, 240, 300};
  for (int i = 0; i < cfg.n_interventions; ++i) {
    Intervention iv;
    iv.id = "i" + std::to_string(i);
    iv.node = cfg.n_vehicles + i;
    bool make_long = rng.unit() < cfg.long_fraction;
    // Keep the short/long mix honest on anything but the tiniest instances.
    if (cfg.n_interventions >= 4) {
      if (i == 0) make_long = false;
      if (i == 1) make_long = true;
    }
    const auto& pool = make_long ? long_durations : short_durations;
    iv.duration = pool[rng.below(pool.size())];
    const int slack = cfg.day_end - iv.duration;
    const int width =
        iv.duration + static_cast<int>(std::llround((1.0 - cfg.window_tightness) * slack));
    // A short intervention must admit some start inside one half-day, or no
    // start time satisfies the half-day rule at all.
    auto half_day_ok = [&](int s) {
      if (iv.duration >= kLongThresholdMinutes) return true;
      if (s + iv.duration <= cfg.midday) return true;
      return std::max(s, cfg.midday) + iv.duration <= s + width;
    };
    iv.window_start = static_cast<int>(rng.below(cfg.day_end - width + 1));
    for (int tries = 0; tries < 64 && !half_day_ok(iv.window_start); ++tries) {
      iv.window_start = static_cast<int>(rng.below(cfg.day_end - width + 1));
    }
    if (!half_day_ok(iv.window_start)) {
      iv.window_start = std::max(0, cfg.midday - width);
    }
    iv.window_end = iv.window_start + width;
    iv.resource_use.assign(inst.intervals.size(), 0);
    for (std::size_t k = 0; k < inst.intervals.size(); ++k) {
      if (inst.intervals[k].start <= iv.window_start && iv.window_end <= inst.intervals[k].end) {
        iv.resource_use[k] = iv.duration;
      }
    }
    inst.interventions.push_back(std::move(iv));
  }

  for (int v = 0; v < cfg.n_vehicles; ++v) {
    Vehicle veh;
    veh.id = "v" + std::to_string(v);
    veh.depot_node = v;
    veh.personnel_cost = rng.range(80, 200) * kMicroScale;
    veh.capacity.resize(inst.intervals.size());
    for (std::size_t k = 0; k < inst.intervals.size(); ++k) {
      const int span = inst.intervals[k].end - inst.intervals[k].start;
      veh.capacity[k] = static_cast<std::int64_t>(std::llround(span * cfg.capacity_factor));
    }
    for (int i = 0; i < cfg.n_interventions; ++i) {
      if (cfg.eligibility >= 1.0 || rng.unit() < cfg.eligibility) veh.eligible.push_back(i);
    }
    if (veh.eligible.empty()) {
      veh.eligible.push_back(static_cast<int>(rng.below(cfg.n_interventions)));
    }
    inst.vehicles.push_back(std::move(veh));
  }
  // Every intervention should have at least one candidate vehicle.
  for (int i = 0; i < cfg.n_interventions; ++i) {
    bool reachable = false;
    for (const auto& veh : inst.vehicles) {
      reachable = reachable ||
                  std::find(veh.eligible.begin(), veh.eligible.end(), i) != veh.eligible.end();
    }
    if (!reachable) {
      inst.vehicles[rng.below(inst.vehicles.size())].eligible.push_back(i);
    }
  }

  inst.meta.source = "generated seed=" + std::to_string(cfg.seed);
  inst.finalize();
  validate_instance(inst);
  return inst;
}

Instance standardize(const Instance& raw, int target_vehicles, int ratio, std::uint64_t seed) {
  const int target_interventions = target_vehicles * ratio;
  if (raw.num_vehicles() < target_vehicles || raw.num_interventions() < target_interventions) {
    throw SemanticError("standardize: raw instance smaller than target (" +
                        std::to_string(raw.num_vehicles()) + "/" +
                        std::to_string(raw.num_interventions()) + " vs " +
                        std::to_string(target_vehicles) + "/" +
                        std::to_string(target_interventions) + ")");
  }

  Rng rng(seed);
  // Vehicles first, then interventions, both uniformly at random.
  std::vector<int> vehicle_order(raw.num_vehicles());
  for (std::size_t i = 0; i < vehicle_order.size(); ++i) vehicle_order[i] = static_cast<int>(i);
  rng.shuffle(vehicle_order);
  std::vector<bool> keep_vehicle(raw.num_vehicles(), false);
  for (int i = 0; i < target_vehicles; ++i) keep_vehicle[vehicle_order[i]] = true;

  std::vector<int> iv_order(raw.num_interventions());
  for (std::size_t i = 0; i < iv_order.size(); ++i) iv_order[i] = static_cast<int>(i);
  rng.shuffle(iv_order);
  std::vector<bool> keep_iv(raw.num_interventions(), false);
  for (int i = 0; i < target_interventions; ++i) keep_iv[iv_order[i]] = true;

  Instance out;
  out.midday = raw.midday;
  out.day_end = raw.day_end;
  out.distance_tariff = raw.distance_tariff;
  out.intervals = raw.intervals;
  out.node_ids = raw.node_ids;
  out.node_kinds = raw.node_kinds;
  out.travel_time = raw.travel_time;
  out.travel_dist = raw.travel_dist;

  std::vector<int> iv_remap(raw.num_interventions(), -1);
  for (int i = 0; i < raw.num_interventions(); ++i) {
    if (keep_iv[i]) {
      iv_remap[i] = static_cast<int>(out.interventions.size());
      out.interventions.push_back(raw.interventions[i]);
    }
  }
  for (int v = 0; v < raw.num_vehicles(); ++v) {
    if (!keep_vehicle[v]) continue;
    Vehicle veh = raw.vehicles[v];
    std::vector<int> eligible;
    for (int e : veh.eligible) {
      if (iv_remap[e] >= 0) eligible.push_back(iv_remap[e]);
    }
    veh.eligible = std::move(eligible);
    out.vehicles.push_back(std::move(veh));
  }

  out.meta.source = raw.meta.source;
  out.meta.original_interventions = raw.num_interventions();
  out.meta.original_vehicles = raw.num_vehicles();
  out.meta.note = "standardized seed=" + std::to_string(seed) + " ratio=1:" + std::to_string(ratio);
  out.finalize();
  validate_instance(out);
  return out;
}

}  // namespace lexrouter
