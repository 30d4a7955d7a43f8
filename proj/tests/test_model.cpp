#include <doctest.h>

#include <array>

#include "lexrouter/model.hpp"
#include "test_util.hpp"

using namespace lexrouter;
using test::LineInstance;

TEST_CASE("long threshold sits exactly at two hours") {
  Intervention iv;
  iv.duration = 120;
  CHECK(is_long(iv));
  iv.duration = 119;
  CHECK(!is_long(iv));
  iv.duration = 480;
  CHECK(is_long(iv));
}

TEST_CASE("hierarchy weight: single-vehicle worked example") {
  // One vehicle, day end 480, min duration 60, distance/time rate 1 at
  // tariff 1, no personnel spread, duration gcd 60: (420 + 0)/60 + 1 = 8.
  LineInstance b(240, 480, "1");
  const int depot = b.depot(0);
  b.job(10, 60, 0, 480);
  b.job(10, 120, 0, 480);
  b.vehicle(depot, "50");
  const BigM m = compute_big_m(b.build());
  CHECK(m.value == 8);
  CHECK(m.duration_gcd == 60);
  CHECK(m.bracket == Rational(420));
}

TEST_CASE("hierarchy weight rounds a fractional evaluation up") {
  // Two vehicles, day end 240, min duration 30, rate 2 at tariff 0.5,
  // personnel spread 100, gcd 30: (2*210*2*0.5 + 100)/30 + 1 = 18.33 -> 19.
  LineInstance b(120, 240, "0.5", 0.5);  // time = km/2 so dist/time = 2
  const int d0 = b.depot(0);
  const int d1 = b.depot(0);
  b.job(10, 30, 0, 240);
  b.job(10, 60, 0, 240);
  b.vehicle(d0, "100");
  b.vehicle(d1, "80");
  const BigM m = compute_big_m(b.build());
  CHECK(m.bracket == Rational(520));
  CHECK(m.value == 19);
}

TEST_CASE("hierarchy weight needs interventions") {
  LineInstance b;
  b.vehicle(b.depot(0), "10");
  CHECK_THROWS_AS(compute_big_m(b.build()), ModelError);
}

TEST_CASE("hierarchy weight is monotone in day end and distances") {
  auto base = [](int day_end) {
    LineInstance b(240, day_end, "1");
    const int depot = b.depot(0);
    b.job(10, 60, 0, day_end);
    b.vehicle(depot, "50");
    return b.build();
  };
  CHECK(compute_big_m(base(480)).value <= compute_big_m(base(600)).value);
  CHECK(compute_big_m(base(480)).value <= compute_big_m(base(960)).value);

  // Stretch one distance entry while holding times fixed.
  Instance inst = base(480);
  const std::int64_t before = compute_big_m(inst).value;
  for (auto& d : inst.travel_dist) d *= 3;
  CHECK(before <= compute_big_m(inst).value);
}

TEST_CASE("route metrics on a one-stop route") {
  LineInstance b;
  const int depot = b.depot(0);
  const int job = b.job(10, 90, 0, 480);
  const int veh = b.vehicle(depot, "50");
  const Instance inst = b.build();
  const RouteMetrics m = route_metrics({job}, veh, inst);
  CHECK(m.duration == 90);
  CHECK(m.cost == 70 * kMicroScale);  // 50 + 10 + 10
  CHECK(m.coverage.test(0));
  CHECK(m.coverage.count() == 1);
}

TEST_CASE("route metrics: an idle vehicle still costs its crew") {
  LineInstance b;
  const int depot = b.depot(0);
  b.job(5, 60, 0, 480);
  const int veh = b.vehicle(depot, "50");
  const RouteMetrics m = route_metrics({}, veh, b.build());
  CHECK(m.duration == 0);
  CHECK(m.cost == 50 * kMicroScale);
  CHECK(m.coverage.none());
}

TEST_CASE("route metrics sums durations over stops") {
  LineInstance b;
  const int depot = b.depot(0);
  const int i = b.job(5, 60, 0, 480);
  const int j = b.job(8, 30, 0, 480);
  const int veh = b.vehicle(depot, "50");
  CHECK(route_metrics({i, j}, veh, b.build()).duration == 90);
}

TEST_CASE("route metrics rejects ineligible stops") {
  LineInstance b;
  const int depot = b.depot(0);
  const int i = b.job(5, 60, 0, 480);
  const int j = b.job(8, 30, 0, 480);
  const int veh = b.vehicle(depot, "50", {i});
  CHECK_THROWS_AS(route_metrics({j}, veh, b.build()), ModelError);
}

namespace {

LexSolution one_route_solution(const Instance& inst, int vehicle, std::vector<int> stops,
                               std::vector<int> starts) {
  LexSolution s;
  Column col;
  col.vehicle = vehicle;
  col.stops = std::move(stops);
  col.start_times = std::move(starts);
  const RouteMetrics m = route_metrics(col.stops, vehicle, inst);
  col.duration = m.duration;
  col.cost = m.cost;
  col.coverage = m.coverage;
  s.routes.push_back(std::move(col));
  recompute_objectives(s, inst);
  return s;
}

}  // namespace

TEST_CASE("validate_schedule accepts a constructed feasible route") {
  LineInstance b;
  const int depot = b.depot(0);
  const int i = b.job(10, 60, 0, 240);
  const int j = b.job(20, 120, 0, 480);
  const int veh = b.vehicle(depot, "50");
  const Instance inst = b.build();
  const LexSolution s = one_route_solution(inst, veh, {i, j}, {10, 80});
  CHECK(validate_schedule(s, inst).empty());
}

TEST_CASE("validate_schedule flags every constraint class") {
  LineInstance b;
  const int d0 = b.depot(0);
  const int d1 = b.depot(0);
  b.interval("k", 0, 480);
  const int i = b.job(10, 60, 0, 240, {{0, 60}});
  const int veh0 = b.vehicle(d0, "50");
  const int veh1 = b.vehicle(d1, "60");
  const Instance inst = b.build();

  SUBCASE("empty solution is always feasible") {
    CHECK(validate_schedule(LexSolution{}, inst).empty());
  }
  SUBCASE("double coverage") {
    LexSolution s = one_route_solution(inst, veh0, {i}, {10});
    LexSolution other = one_route_solution(inst, veh1, {i}, {10});
    s.routes.push_back(other.routes.front());
    recompute_objectives(s, inst);
    const auto violations = validate_schedule(s, inst);
    REQUIRE(!violations.empty());
    bool coverage = false;
    for (const auto& v : violations) coverage = coverage || v.kind == ViolationKind::coverage;
    CHECK(coverage);
  }
  SUBCASE("window breach") {
    const auto violations = validate_schedule(one_route_solution(inst, veh0, {i}, {200}), inst);
    REQUIRE(!violations.empty());
    CHECK(violations.front().kind == ViolationKind::window);
  }
  SUBCASE("chaining breach") {
    // Starts before it can arrive: travel from the depot takes 10.
    const auto violations = validate_schedule(one_route_solution(inst, veh0, {i}, {5}), inst);
    REQUIRE(!violations.empty());
    CHECK(violations.front().kind == ViolationKind::time_chaining);
  }
}

TEST_CASE("validate_schedule flags a short intervention straddling lunch") {
  LineInstance b;
  const int depot = b.depot(0);
  const int i = b.job(10, 60, 0, 480);
  const int veh = b.vehicle(depot, "50");
  const Instance inst = b.build();
  // start 220, end 280 straddles 240.
  const auto violations = validate_schedule(one_route_solution(inst, veh, {i}, {220}), inst);
  REQUIRE(!violations.empty());
  CHECK(violations.front().kind == ViolationKind::half_day);
}

TEST_CASE("validate_schedule flags resource and day-end breaches") {
  LineInstance b;
  const int depot = b.depot(0);
  b.interval("k", 0, 480);
  const int i = b.job(10, 120, 0, 480, {{0, 120}});
  const int veh = b.vehicle(depot, "50", {}, {100});
  const Instance inst = b.build();
  const auto violations = validate_schedule(one_route_solution(inst, veh, {i}, {10}), inst);
  bool resource = false;
  for (const auto& v : violations) resource = resource || v.kind == ViolationKind::resource;
  CHECK(resource);

  LineInstance b2;
  const int depot2 = b2.depot(0);
  const int far = b2.job(200, 120, 0, 480);
  const int veh2 = b2.vehicle(depot2, "50");
  const Instance inst2 = b2.build();
  const auto v2 = validate_schedule(one_route_solution(inst2, veh2, {far}, {300}), inst2);
  bool day_end = false;
  for (const auto& v : v2) day_end = day_end || v.kind == ViolationKind::day_end;
  CHECK(day_end);
}
