#include "mrss/rational.h"

#include <charconv>
#include <limits>
#include <ostream>

#include "mrss/errors.h"

namespace mrss {
namespace {

WideInt wide_gcd(WideInt a, WideInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    WideInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(WideInt v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kParseError,
                "not a rational: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::kInvalidInput, "zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(WideInt num, WideInt den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  WideInt g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (!fits(num) || !fits(den)) {
    throw Error(ErrorCode::kArithmeticOverflow, "rational exceeds int64 range");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw Error(ErrorCode::kParseError, "empty rational");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::int64_t p = parse_int(s.substr(0, slash), text);
    std::int64_t q = parse_int(s.substr(slash + 1), text);
    if (q == 0) throw Error(ErrorCode::kParseError, "zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative || (!int_part.empty() && int_part.front() == '+')) {
      int_part.remove_prefix(1);
    }
    if (frac_part.size() > 18 || (int_part.empty() && frac_part.empty())) {
      throw Error(ErrorCode::kParseError, "not a rational: '" + std::string(text) + "'");
    }
    std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t fraction = frac_part.empty() ? 0 : parse_int(frac_part, text);
    if (whole < 0 || fraction < 0) {
      throw Error(ErrorCode::kParseError, "not a rational: '" + std::string(text) + "'");
    }
    WideInt scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    WideInt num = static_cast<WideInt>(whole) * scale + fraction;
    return from_wide(negative ? -num : num, scale);
  }
  return Rational(parse_int(s, text));
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

Rational Rational::frac() const { return *this - Rational(floor()); }

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return from_wide(-static_cast<WideInt>(num_), den_); }

Rational& Rational::operator+=(const Rational& rhs) {
  *this = from_wide(static_cast<WideInt>(num_) * rhs.den_ +
                        static_cast<WideInt>(rhs.num_) * den_,
                    static_cast<WideInt>(den_) * rhs.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  *this = from_wide(static_cast<WideInt>(num_) * rhs.num_,
                    static_cast<WideInt>(den_) * rhs.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_ == 0) throw Error(ErrorCode::kInvalidInput, "division by zero");
  *this = from_wide(static_cast<WideInt>(num_) * rhs.den_,
                    static_cast<WideInt>(den_) * rhs.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return static_cast<WideInt>(a.num_) * b.den_ <=> static_cast<WideInt>(b.num_) * a.den_;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.to_string();
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(wide_gcd(a, b));
}

std::int64_t lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  WideInt g = wide_gcd(a, b);
  WideInt l = static_cast<WideInt>(a) / g * b;
  if (l < 0) l = -l;
  if (!fits(l)) throw Error(ErrorCode::kArithmeticOverflow, "lcm exceeds int64 range");
  return static_cast<std::int64_t>(l);
}

}  // namespace mrss
