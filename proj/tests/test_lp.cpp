#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lexrouter/lp.hpp"

using namespace lexrouter;

namespace {

// Checks the accounting identity obj = sum(dual*rhs) + sum(rc*x) and
// complementary slackness on a solved LP.
void check_duality(const LinearModel& m, const SolveOutcome& r) {
  REQUIRE(r.status == SolveStatus::optimal);
  REQUIRE(r.has_duals);
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < m.rows.size(); ++i) dual_obj += r.duals[i] * m.rows[i].rhs;
  for (std::size_t j = 0; j < m.vars.size(); ++j) dual_obj += r.reduced_costs[j] * r.primal[j];
  CHECK(std::abs(dual_obj - r.objective) < 1e-6 * (1.0 + std::abs(r.objective)));
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    double lhs = 0.0;
    for (const auto& [var, coef] : m.rows[i].coeffs) lhs += coef * r.primal[var];
    if (std::abs(lhs - m.rows[i].rhs) > 1e-6) {
      CHECK(std::abs(r.duals[i]) < 1e-6);  // slack row -> zero dual
    }
  }
}

}  // namespace

TEST_CASE("single-constraint lp with unit dual") {
  LinearModel m;
  const int x = m.add_variable("x", 0.0, kLpInfinity, false, 1.0);
  const int row = m.add_row("cap", RowSense::le, 1.0);
  m.add_coeff(row, x, 1.0);
  const auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(r.duals[row] == doctest::Approx(1.0));
  check_duality(m, r);
}

TEST_CASE("infeasible system via rows") {
  LinearModel m;
  const int x = m.add_variable("x", -kLpInfinity, kLpInfinity, false, 0.0);
  int r1 = m.add_row("le0", RowSense::le, 0.0);
  m.add_coeff(r1, x, 1.0);
  int r2 = m.add_row("ge1", RowSense::ge, 1.0);
  m.add_coeff(r2, x, 1.0);
  CHECK(solve_lp(m).status == SolveStatus::infeasible);
}

TEST_CASE("empty model solves to zero") {
  LinearModel m;
  const auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(0.0));
}

TEST_CASE("unbounded lp") {
  LinearModel m;
  m.add_variable("x", 0.0, kLpInfinity, false, 1.0);
  CHECK(solve_lp(m).status == SolveStatus::unbounded);
}

TEST_CASE("canned duals: two-resource production") {
  // max 3x + 2y s.t. x + y <= 4, x <= 2; optimum (2,2) = 10, duals (2,1).
  LinearModel m;
  const int x = m.add_variable("x", 0.0, kLpInfinity, false, 3.0);
  const int y = m.add_variable("y", 0.0, kLpInfinity, false, 2.0);
  int r1 = m.add_row("sum", RowSense::le, 4.0);
  m.add_coeff(r1, x, 1.0);
  m.add_coeff(r1, y, 1.0);
  int r2 = m.add_row("xcap", RowSense::le, 2.0);
  m.add_coeff(r2, x, 1.0);
  const auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(10.0));
  CHECK(r.primal[x] == doctest::Approx(2.0));
  CHECK(r.primal[y] == doctest::Approx(2.0));
  CHECK(r.duals[r1] == doctest::Approx(2.0));
  CHECK(r.duals[r2] == doctest::Approx(1.0));
  check_duality(m, r);
}

TEST_CASE("canned duals: ge row under maximization has nonpositive dual") {
  // max -x s.t. x >= 1, x in [0, 10]; optimum x = 1, dual -1.
  LinearModel m;
  const int x = m.add_variable("x", 0.0, 10.0, false, -1.0);
  int row = m.add_row("floor", RowSense::ge, 1.0);
  m.add_coeff(row, x, 1.0);
  const auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(-1.0));
  CHECK(r.duals[row] == doctest::Approx(-1.0));
  check_duality(m, r);
}

TEST_CASE("canned duals: equality row") {
  // max x + y s.t. x + y = 3, x <= 2, y <= 2; dual of the equality is 1.
  LinearModel m;
  const int x = m.add_variable("x", 0.0, 2.0, false, 1.0);
  const int y = m.add_variable("y", 0.0, 2.0, false, 1.0);
  int row = m.add_row("balance", RowSense::eq, 3.0);
  m.add_coeff(row, x, 1.0);
  m.add_coeff(row, y, 1.0);
  const auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(3.0));
  CHECK(r.duals[row] == doctest::Approx(1.0));
  check_duality(m, r);
}

TEST_CASE("canned duals: minimization diet") {
  // min 2x + 3y s.t. x + y >= 4, x <= 3; optimum (3,1) = 9.
  LinearModel m;
  m.sense = ObjSense::minimize;
  const int x = m.add_variable("x", 0.0, 3.0, false, 2.0);
  const int y = m.add_variable("y", 0.0, kLpInfinity, false, 3.0);
  int r1 = m.add_row("need", RowSense::ge, 4.0);
  m.add_coeff(r1, x, 1.0);
  m.add_coeff(r1, y, 1.0);
  const auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(9.0));
  CHECK(r.primal[x] == doctest::Approx(3.0));
  CHECK(r.primal[y] == doctest::Approx(1.0));
  check_duality(m, r);
}

TEST_CASE("canned duals: degenerate cover pair") {
  // max 5a + 4b s.t. a + b <= 1, a <= 1, b <= 1 (rows, not bounds).
  LinearModel m;
  const int a = m.add_variable("a", 0.0, kLpInfinity, false, 5.0);
  const int b = m.add_variable("b", 0.0, kLpInfinity, false, 4.0);
  int r1 = m.add_row("pack", RowSense::le, 1.0);
  m.add_coeff(r1, a, 1.0);
  m.add_coeff(r1, b, 1.0);
  int r2 = m.add_row("acap", RowSense::le, 1.0);
  m.add_coeff(r2, a, 1.0);
  int r3 = m.add_row("bcap", RowSense::le, 1.0);
  m.add_coeff(r3, b, 1.0);
  const auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(5.0));
  check_duality(m, r);
}

TEST_CASE("strong duality on random bounded lps") {
  std::uint64_t state = 12345;
  auto next = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>((state >> 33) % 2000) / 1000.0 - 1.0;  // [-1, 1)
  };
  for (int trial = 0; trial < 50; ++trial) {
    LinearModel m;
    const int n = 3 + trial % 5;
    const int rows = 2 + trial % 4;
    for (int j = 0; j < n; ++j) m.add_variable("", 0.0, 1.0 + std::abs(next()), false, next() * 5);
    for (int i = 0; i < rows; ++i) {
      int r = m.add_row("", RowSense::le, 1.0 + std::abs(next()) * 3);
      for (int j = 0; j < n; ++j) {
        const double c = next();
        if (std::abs(c) > 0.3) m.add_coeff(r, j, std::abs(c));
      }
    }
    const auto r = solve_lp(m);  // x = 0 feasible, bounds finite -> optimal
    check_duality(m, r);
  }
}

TEST_CASE("milp rounds down fractional cap") {
  LinearModel m;
  m.add_variable("x", 0.0, 2.5, true, 1.0);
  const auto r = solve_milp(m, 10.0);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.bound == doctest::Approx(2.0));
  CHECK(!r.has_duals);
}

TEST_CASE("milp knapsack matches enumeration") {
  // max 10a + 13b + 7c s.t. 4a + 5b + 3c <= 8, binary.
  const double value[3] = {10, 13, 7};
  const double weight[3] = {4, 5, 3};
  double best = 0.0;
  for (int mask = 0; mask < 8; ++mask) {
    double v = 0, w = 0;
    for (int j = 0; j < 3; ++j) {
      if (mask & (1 << j)) {
        v += value[j];
        w += weight[j];
      }
    }
    if (w <= 8 && v > best) best = v;
  }
  LinearModel m;
  int row = m.add_row("cap", RowSense::le, 8.0);
  for (int j = 0; j < 3; ++j) {
    const int var = m.add_variable("", 0.0, 1.0, true, value[j]);
    m.add_coeff(row, var, weight[j]);
  }
  const auto r = solve_milp(m, 10.0);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(best));
}

TEST_CASE("milp with zero time limit never claims optimal") {
  LinearModel m;
  int row = m.add_row("cap", RowSense::le, 8.0);
  for (int j = 0; j < 3; ++j) {
    const int var = m.add_variable("", 0.0, 1.0, true, j + 1.0);
    m.add_coeff(row, var, 4.0 - j);
  }
  const auto r = solve_milp(m, 0.0);
  CHECK(r.status != SolveStatus::optimal);
}

TEST_CASE("milp warm start is honored under zero budget") {
  LinearModel m;
  int row = m.add_row("cap", RowSense::le, 1.0);
  const int a = m.add_variable("a", 0.0, 1.0, true, 2.0);
  const int b = m.add_variable("b", 0.0, 1.0, true, 1.0);
  m.add_coeff(row, a, 1.0);
  m.add_coeff(row, b, 1.0);
  m.warm_start = {{b, 1.0}};
  const auto r = solve_milp(m, 0.0);
  REQUIRE(r.status == SolveStatus::feasible_limit);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(r.primal[a] == doctest::Approx(0.0));
  CHECK(r.primal[b] == doctest::Approx(1.0));
}

TEST_CASE("milp infeasible") {
  LinearModel m;
  const int x = m.add_variable("x", 0.0, 1.0, true, 1.0);
  int r1 = m.add_row("ge", RowSense::ge, 2.0);
  m.add_coeff(r1, x, 1.0);
  CHECK(solve_milp(m, 5.0).status == SolveStatus::infeasible);
}

TEST_CASE("lp text export mentions every section") {
  LinearModel m;
  const int x = m.add_variable("x", 0.0, 2.0, true, 3.0);
  const int y = m.add_variable("y", 0.0, kLpInfinity, false, -1.0);
  int row = m.add_row("mix", RowSense::le, 4.0);
  m.add_coeff(row, x, 1.0);
  m.add_coeff(row, y, 2.0);
  std::ostringstream os;
  write_lp_text(m, os);
  const std::string text = os.str();
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("Generals") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
  CHECK(text.find("mix:") != std::string::npos);
}

TEST_CASE("model check rejects bad references") {
  LinearModel m;
  m.add_variable("x", 0.0, 1.0, false, 1.0);
  int row = m.add_row("r", RowSense::le, 1.0);
  m.rows[row].coeffs.push_back({5, 1.0});
  CHECK_THROWS(solve_lp(m));
}
