#include "lexrouter/numeric.hpp"

#include <cctype>

namespace lexrouter {

namespace {

std::int64_t checked_cast(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw NumericError(std::string("rational overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw NumericError("rational with zero denominator");
  *this = normalized(num, den);
}

Rational Rational::normalized(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = num == 0 ? den : gcd128(num, den);
  Rational r;
  r.num_ = checked_cast(num / g, "normalize");
  r.den_ = checked_cast(den / g, "normalize");
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  return normalized(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                    static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return normalized(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                    static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return normalized(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw NumericError("rational division by zero");
  return normalized(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t parse_scaled_decimal(const std::string& text, std::int64_t scale) {
  if (text.empty()) throw NumericError("empty decimal string");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-') {
    negative = true;
    ++pos;
  }
  std::int64_t integral = 0;
  bool any_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    if (integral > (INT64_MAX - 9) / 10) throw NumericError("decimal out of range: " + text);
    integral = integral * 10 + (text[pos] - '0');
    any_digit = true;
    ++pos;
  }
  if (integral > INT64_MAX / scale) throw NumericError("decimal out of range: " + text);
  std::int64_t frac = 0;
  std::int64_t frac_scale = scale;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (frac_scale == 1) {
        if (text[pos] != '0') {
          throw NumericError("decimal '" + text + "' has more precision than scale 1/" +
                             std::to_string(scale) + " admits");
        }
      } else {
        frac_scale /= 10;
        frac += (text[pos] - '0') * frac_scale;
      }
      any_digit = true;
      ++pos;
    }
  }
  if (!any_digit || pos != text.size()) throw NumericError("malformed decimal string: " + text);
  const std::int64_t value = integral * scale + frac;
  return negative ? -value : value;
}

std::string format_scaled_decimal(std::int64_t value, std::int64_t scale) {
  std::string sign;
  if (value < 0) {
    sign = "-";
    value = -value;
  }
  std::string out = sign + std::to_string(value / scale);
  std::int64_t frac = value % scale;
  if (frac != 0) {
    std::string digits;
    for (std::int64_t s = scale / 10; s >= 1; s /= 10) {
      digits.push_back(static_cast<char>('0' + (frac / s) % 10));
    }
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

std::int64_t gcd_of(const std::vector<std::int64_t>& values) {
  std::int64_t g = 0;
  for (std::int64_t v : values) g = std::gcd(g, v);
  return g;
}

std::size_t Bitset::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Bitset::any() const {
  for (auto w : words_) {
    if (w != 0) return true;
  }
  return false;
}

bool Bitset::is_subset_of(const Bitset& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~o.words_[i]) != 0) return false;
  }
  return true;
}

bool Bitset::intersects(const Bitset& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & o.words_[i]) != 0) return true;
  }
  return false;
}

std::size_t Bitset::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw NumericError("Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t draw;
  do {
    draw = next();
  } while (draw >= limit);
  return draw % n;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

}  // namespace lexrouter
