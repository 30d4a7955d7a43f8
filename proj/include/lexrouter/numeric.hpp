#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lexrouter {

// Fixed-point scales. Distances are stored in milli-km, the per-km tariff in
// milli-currency, personnel costs and every derived cost in micro-currency.
// A milli * milli product lands exactly on the micro scale.
inline constexpr std::int64_t kMilliScale = 1'000;
inline constexpr std::int64_t kMicroScale = 1'000'000;

using Micro = std::int64_t;  // micro-currency
using Milli = std::int64_t;  // milli-km or milli-currency-per-km

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact rational on int64 with 128-bit intermediates. Only needed for the
// hierarchy-weight formula, so the value range stays small.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }

  bool is_integral() const { return den_ == 1; }
  std::int64_t floor() const;
  std::int64_t ceil() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

 private:
  static Rational normalized(__int128 num, __int128 den);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Parses a non-negative decimal string ("12", "0.35", "1.250") into an
// integer scaled by `scale` (a power of ten). More fractional digits than the
// scale admits is an error, as is anything non-numeric.
std::int64_t parse_scaled_decimal(const std::string& text, std::int64_t scale);

// Formats a scaled integer back to a minimal decimal string.
std::string format_scaled_decimal(std::int64_t value, std::int64_t scale);

// gcd over a list, 0 for an empty list.
std::int64_t gcd_of(const std::vector<std::int64_t>& values);

// Compact bitset sized at runtime; used for coverage / visited / reachable
// sets over intervention indices.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const { return bits_; }
  void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  std::size_t count() const;
  bool any() const;
  bool none() const { return !any(); }

  bool is_subset_of(const Bitset& o) const;
  bool intersects(const Bitset& o) const;

  bool operator==(const Bitset& o) const { return bits_ == o.bits_ && words_ == o.words_; }

  std::size_t hash() const;

  // Iterates set bits in increasing order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        const int bit = std::countr_zero(word);
        fn(w * 64 + static_cast<std::size_t>(bit));
        word &= word - 1;
      }
    }
  }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

// Deterministic RNG wrapper. mt19937_64 output is fully specified by the
// standard; bounded draws use rejection sampling instead of
// std::uniform_int_distribution, whose mapping is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace lexrouter
