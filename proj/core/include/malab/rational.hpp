#pragma once

#include <cstdint>
#include <string>

namespace malab {

/// Exact rational number p/q with q > 0 and gcd(p, q) = 1.
///
/// The decay exponent is kept exact so that resonance conditions such as
/// zeta*k + n*(j - k) == 2 are decided in integer arithmetic.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);
  Rational(std::int64_t value) : Rational(value, 1) {}  // NOLINT(implicit)

  /// Best rational approximation with denominator <= max_den
  /// (continued fractions).
  static Rational approximate(double value, std::int64_t max_den = 1000000);

  /// Parses "p/q", "p" or a decimal literal.
  static Rational parse(const std::string& text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace malab
