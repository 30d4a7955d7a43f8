#include <doctest.h>

#include "lexrouter/instance_io.hpp"

using namespace lexrouter;

namespace {

// Smallest schema-valid document: one vehicle, one intervention.
const char* kMinimalDoc = R"({
  "day": {"md": 240, "ed": 480, "delta": "0.5"},
  "intervals": [{"id": "k0", "start": 0, "end": 480}],
  "nodes": [{"id": "n0", "kind": "depot"}, {"id": "n1", "kind": "intervention"}],
  "travel": {"time": [[0, 10], [10, 0]], "dist": [["0", "2.5"], ["2.5", "0"]]},
  "interventions": [{"id": "i0", "node": "n1", "d": 60, "s": 0, "e": 240, "q": {"k0": 60}}],
  "vehicles": [{"id": "v0", "depot_node": "n0", "g": "100.5", "m": {"k0": 400}, "eligible": ["i0"]}]
})";

std::string patched(const std::string& from, const std::string& to) {
  std::string doc = kMinimalDoc;
  const auto pos = doc.find(from);
  REQUIRE(pos != std::string::npos);
  doc.replace(pos, from.size(), to);
  return doc;
}

}  // namespace

TEST_CASE("minimal document parses into a consistent instance") {
  const Instance inst = parse_instance(kMinimalDoc);
  CHECK(inst.num_interventions() == 1);
  CHECK(inst.num_vehicles() == 1);
  CHECK(inst.midday == 240);
  CHECK(inst.distance_tariff == 500);
  CHECK(inst.vehicles[0].personnel_cost == 100'500'000);
  CHECK(inst.distance(0, 1) == 2500);
  CHECK(inst.arc_cost(0, 1) == 1'250'000);  // 0.5 * 2.5 in exact micro
  CHECK(inst.can_serve(0, 0));
}

TEST_CASE("window invariant breach reports its path") {
  const std::string doc = patched("\"d\": 60, \"s\": 0, \"e\": 240", "\"d\": 60, \"s\": 200, \"e\": 240");
  try {
    parse_instance(doc);
    FAIL("expected a semantic error");
  } catch (const SemanticError& e) {
    CHECK(std::string(e.what()).find("interventions[0]") != std::string::npos);
    CHECK(std::string(e.what()).find("window") != std::string::npos);
  }
}

TEST_CASE("missing field is a schema error naming the path") {
  const std::string doc = patched("\"d\": 60, ", "");
  try {
    parse_instance(doc);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find(".d") != std::string::npos);
  }
}

TEST_CASE("triangle inequality violations are a hard load error") {
  std::string doc = R"({
    "day": {"md": 240, "ed": 480, "delta": "1"},
    "intervals": [],
    "nodes": [{"id": "n0", "kind": "depot"}, {"id": "n1", "kind": "intervention"},
              {"id": "n2", "kind": "intervention"}],
    "travel": {"time": [[0, 10, 30], [10, 0, 5], [30, 5, 0]],
               "dist": [["0", "1", "3"], ["1", "0", "1"], ["3", "1", "0"]]},
    "interventions": [{"id": "i0", "node": "n1", "d": 60, "s": 0, "e": 480, "q": {}},
                      {"id": "i1", "node": "n2", "d": 60, "s": 0, "e": 480, "q": {}}],
    "vehicles": [{"id": "v0", "depot_node": "n0", "g": "10", "m": {}, "eligible": ["i0", "i1"]}]
  })";
  CHECK_THROWS_WITH_AS(parse_instance(doc),
                       doctest::Contains("triangle inequality"), SemanticError);
}

TEST_CASE("positive distance over zero travel time is rejected") {
  const std::string doc = patched("\"time\": [[0, 10], [10, 0]]", "\"time\": [[0, 0], [0, 0]]");
  CHECK_THROWS_AS(parse_instance(doc), SemanticError);
}

TEST_CASE("resource use outside the window's interval is rejected") {
  // Interval k0 shrunk so it no longer contains the window.
  const std::string doc = patched("{\"id\": \"k0\", \"start\": 0, \"end\": 480}",
                                  "{\"id\": \"k0\", \"start\": 0, \"end\": 100}");
  CHECK_THROWS_AS(parse_instance(doc), SemanticError);
}

TEST_CASE("serialize / parse round trip is semantically idempotent") {
  const Instance inst = parse_instance(kMinimalDoc);
  const std::string once = serialize_instance(inst);
  const Instance again = parse_instance(once);
  CHECK(serialize_instance(again) == once);
}

TEST_CASE("generator is deterministic byte for byte") {
  GeneratorConfig cfg;
  cfg.n_interventions = 12;
  cfg.n_vehicles = 3;
  cfg.seed = 99;
  const std::string a = serialize_instance(generate_random(cfg));
  const std::string b = serialize_instance(generate_random(cfg));
  CHECK(a == b);
  GeneratorConfig other = cfg;
  other.seed = 100;
  CHECK(serialize_instance(generate_random(other)) != a);
}

TEST_CASE("generated instances parse and hit the requested shape") {
  GeneratorConfig cfg;
  cfg.n_interventions = 20;
  cfg.n_vehicles = 4;
  cfg.seed = 7;
  const Instance inst = generate_random(cfg);
  CHECK(inst.num_interventions() == 20);
  CHECK(inst.num_vehicles() == 4);
  // Round trip through the document form revalidates every invariant.
  const Instance reparsed = parse_instance(serialize_instance(inst));
  CHECK(reparsed.num_interventions() == 20);
  // The duration mix covers both classes.
  bool any_long = false, any_short = false;
  for (const auto& iv : inst.interventions) {
    (is_long(iv) ? any_long : any_short) = true;
  }
  CHECK(any_long);
  CHECK(any_short);
}

TEST_CASE("window tightness zero makes every window the whole day") {
  GeneratorConfig cfg;
  cfg.n_interventions = 6;
  cfg.n_vehicles = 2;
  cfg.window_tightness = 0.0;
  cfg.seed = 3;
  const Instance inst = generate_random(cfg);
  for (const auto& iv : inst.interventions) {
    CHECK(iv.window_start == 0);
    CHECK(iv.window_end == inst.day_end);
  }
}

TEST_CASE("standardize cuts to the target and records provenance") {
  GeneratorConfig cfg;
  cfg.n_interventions = 105;
  cfg.n_vehicles = 22;
  cfg.seed = 17;
  const Instance raw = generate_random(cfg);
  const Instance cut = standardize(raw, 20, 5, 5);
  CHECK(cut.num_vehicles() == 20);
  CHECK(cut.num_interventions() == 100);
  CHECK(cut.meta.original_interventions == 105);
  CHECK(cut.meta.original_vehicles == 22);

  // Survivors are the original objects, only re-indexed.
  int matched = 0;
  for (const auto& iv : cut.interventions) {
    for (const auto& orig : raw.interventions) {
      if (orig.id == iv.id) {
        CHECK(orig.duration == iv.duration);
        CHECK(orig.window_start == iv.window_start);
        CHECK(orig.node == iv.node);
        ++matched;
        break;
      }
    }
  }
  CHECK(matched == 100);

  // Determinism per seed.
  CHECK(serialize_instance(standardize(raw, 20, 5, 5)) == serialize_instance(cut));
  CHECK(serialize_instance(standardize(raw, 20, 5, 6)) != serialize_instance(cut));
}

TEST_CASE("standardize keeps an instance already at the target") {
  GeneratorConfig cfg;
  cfg.n_interventions = 20;
  cfg.n_vehicles = 4;
  cfg.seed = 21;
  const Instance raw = generate_random(cfg);
  const Instance cut = standardize(raw, 4, 5, 1);
  CHECK(cut.num_vehicles() == 4);
  CHECK(cut.num_interventions() == 20);
  for (int i = 0; i < 20; ++i) CHECK(cut.interventions[i].id == raw.interventions[i].id);
}

TEST_CASE("standardize rejects undersized raws and makes the XS shape") {
  GeneratorConfig cfg;
  cfg.n_interventions = 30;
  cfg.n_vehicles = 4;
  cfg.seed = 2;
  const Instance raw = generate_random(cfg);
  const Instance xs = standardize(raw, 4, 5, 9);
  CHECK(xs.num_interventions() == 20);
  CHECK(xs.num_vehicles() == 4);
  CHECK_THROWS_AS(standardize(raw, 7, 5, 0), SemanticError);
}
