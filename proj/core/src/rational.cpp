#include "malab/rational.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "malab/errors.hpp"

namespace malab {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

Rational Rational::approximate(double value, std::int64_t max_den) {
  if (!std::isfinite(value)) throw InvalidArgument("cannot approximate a non-finite value");
  // Convergents h/k of the continued fraction of value.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(value));
  std::int64_t k_prev = 0, k = 1;
  double frac = value - std::floor(value);
  while (frac > 1e-15) {
    const double inv = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_den) break;
    const std::int64_t h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = inv - static_cast<double>(a);
    if (std::abs(static_cast<double>(h) / static_cast<double>(k) - value) <=
        1e-15 * std::max(1.0, std::abs(value)))
      break;
  }
  return Rational(h, k);
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    }
    if (text.find_first_of(".eE") == std::string::npos) return Rational(std::stoll(text), 1);
    return approximate(std::stod(text));
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot parse rational from '" + text + "'");
  }
}

std::string Rational::to_string() const {
  std::ostringstream os;
  os << num_;
  if (den_ != 1) os << '/' << den_;
  return os.str();
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw InvalidArgument("rational division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return a.num_ * b.den_ < b.num_ * a.den_;
}

}  // namespace malab
