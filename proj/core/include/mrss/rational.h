#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace mrss {

// 128-bit intermediate for overflow-free products of int64 parts.
__extension__ typedef __int128 WideInt;

/// Exact rational number num/den with 64-bit parts, always kept in lowest
/// terms with den > 0. Arithmetic that would leave the int64 range throws
/// Error(kArithmeticOverflow) instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);  // NOLINT(runtime/explicit)

  /// Accepts "p/q", "p", and finite decimals such as "-1.25" (converted
  /// exactly). Throws Error(kParseError) on anything else.
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  /// Largest integer <= *this.
  std::int64_t floor() const;
  /// *this - floor(), in [0, 1).
  Rational frac() const;
  double to_double() const { return static_cast<double>(num_) / den_; }
  long double to_long_double() const {
    return static_cast<long double>(num_) / den_;
  }
  std::string to_string() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(WideInt num, WideInt den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Non-negative gcd; gcd(0, 0) == 0.
std::int64_t gcd(std::int64_t a, std::int64_t b);
/// Non-negative lcm; throws Error(kArithmeticOverflow) past int64.
std::int64_t lcm(std::int64_t a, std::int64_t b);

}  // namespace mrss
