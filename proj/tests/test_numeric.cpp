#include <doctest.h>

#include "lexrouter/numeric.hpp"

using namespace lexrouter;

TEST_CASE("rational arithmetic and rounding") {
  Rational a(1, 3);
  Rational b(1, 6);
  CHECK((a + b) == Rational(1, 2));
  CHECK((a - b) == Rational(1, 6));
  CHECK((a * b) == Rational(1, 18));
  CHECK((a / b) == Rational(2));
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(8, 4).is_integral());
  CHECK(Rational(520, 30).ceil() == 18);
  CHECK_THROWS_AS(Rational(1, 0), NumericError);
}

TEST_CASE("scaled decimal parse and format") {
  CHECK(parse_scaled_decimal("12", 1000) == 12000);
  CHECK(parse_scaled_decimal("0.35", 1000) == 350);
  CHECK(parse_scaled_decimal("1.250", 1000) == 1250);
  CHECK(parse_scaled_decimal("100.5", kMicroScale) == 100'500'000);
  CHECK(parse_scaled_decimal("0.3500", 1000) == 350);  // trailing zeros beyond scale are fine
  CHECK_THROWS_AS(parse_scaled_decimal("0.3501", 1000), NumericError);
  CHECK_THROWS_AS(parse_scaled_decimal("abc", 1000), NumericError);
  CHECK_THROWS_AS(parse_scaled_decimal("", 1000), NumericError);
  CHECK(format_scaled_decimal(12000, 1000) == "12");
  CHECK(format_scaled_decimal(350, 1000) == "0.35");
  CHECK(format_scaled_decimal(100'500'000, kMicroScale) == "100.5");
  CHECK(format_scaled_decimal(0, 1000) == "0");

  // Round trips on a grid of values.
  for (std::int64_t v : {0, 1, 999, 1000, 1001, 123456, 10'000'000}) {
    CHECK(parse_scaled_decimal(format_scaled_decimal(v, 1000), 1000) == v);
  }
}

TEST_CASE("bitset operations") {
  Bitset a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(64);
  CHECK(a.count() == 3);
  CHECK(b.is_subset_of(a));
  CHECK(!a.is_subset_of(b));
  CHECK(a.intersects(b));
  b.reset(64);
  CHECK(!a.intersects(b));
  CHECK(b.none());
  std::vector<std::size_t> seen;
  a.for_each([&](std::size_t i) { seen.push_back(i); });
  CHECK(seen == std::vector<std::size_t>{0, 64, 129});
}

TEST_CASE("rng determinism and bounds") {
  Rng r1(42), r2(42);
  for (int i = 0; i < 100; ++i) {
    const auto v = r1.below(17);
    CHECK(v == r2.below(17));
    CHECK(v < 17);
  }
  Rng r3(7);
  for (int i = 0; i < 100; ++i) {
    const auto v = r3.range(5, 9);
    CHECK(v >= 5);
    CHECK(v <= 9);
  }
}

TEST_CASE("gcd_of") {
  CHECK(gcd_of({}) == 0);
  CHECK(gcd_of({60, 90, 120}) == 30);
  CHECK(gcd_of({7}) == 7);
}
