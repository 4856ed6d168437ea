#include "malab/radial_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "malab/errors.hpp"
#include "malab/quadrature.hpp"

namespace malab::radial {
namespace {
constexpr int kInnerPanels = 64;
}

void RadialProfile::validate() const {
  if (n < 2) throw InvalidArgument("dimension n must be >= 2");
  if (!(zeta > Rational(0)) || zeta > Rational(2))
    throw InvalidArgument("decay exponent zeta must lie in (0, 2], got " + zeta.to_string());
  if (!(quad_tol > 0.0)) throw InvalidArgument("quad_tol must be positive");
}

KeyValueDoc RadialProfile::to_doc() const {
  KeyValueDoc doc;
  doc.set("n", static_cast<long long>(n));
  doc.set("zeta_num", static_cast<long long>(zeta.num()));
  doc.set("zeta_den", static_cast<long long>(zeta.den()));
  doc.set("quad_tol", quad_tol);
  doc.set("force_constant", force_constant);
  return doc;
}

RadialProfile RadialProfile::from_doc(const KeyValueDoc& doc) {
  RadialProfile p;
  p.n = static_cast<int>(doc.get_int("n"));
  if (doc.has("zeta_num") || doc.has("zeta_den")) {
    p.zeta = Rational(doc.get_int("zeta_num"), doc.get_int("zeta_den", 1));
  } else if (doc.has("zeta")) {
    p.zeta = doc.get_rational("zeta");
  }
  p.quad_tol = doc.get_double("quad_tol", p.quad_tol);
  p.force_constant = doc.get_bool("force_constant", false);
  p.validate();
  return p;
}

double smooth_step(double t) {
  if (t <= 1.0) return 0.0;
  if (t >= 2.0) return 1.0;
  const double a = std::exp(-1.0 / (t - 1.0));
  const double b = std::exp(-1.0 / (2.0 - t));
  return a / (a + b);
}

RadialSolution::RadialSolution(RadialProfile profile) : profile_(std::move(profile)) {
  profile_.validate();
  if (profile_.force_constant) return;
  const int n = profile_.n;
  const double zeta = profile_.zeta_value();
  inner_table_.assign(kInnerPanels + 1, 0.0);
  for (int i = 1; i <= kInnerPanels; ++i) {
    const double a = 1.0 + static_cast<double>(i - 1) / kInnerPanels;
    inner_table_[i] = inner_table_[i - 1] + excess_mass_inner(a + 1.0 / kInnerPanels);
  }
  const double inner = inner_table_.back();
  if (profile_.log_squared_regime()) {
    tail_constant_ = inner - std::log(2.0);
  } else {
    tail_constant_ = inner - std::pow(2.0, n - zeta) / (n - zeta);
  }
  using GL = boost::math::quadrature::gauss<double, 20>;
  auto integrand = [this](double s) { return deviation_integrand(s); };
  deviation_table_.assign(kInnerPanels + 1, 0.0);
  for (int i = 1; i <= kInnerPanels; ++i) {
    const double a = 1.0 + static_cast<double>(i - 1) / kInnerPanels;
    deviation_table_[i] = deviation_table_[i - 1] + GL::integrate(integrand, a, a + 1.0 / kInnerPanels);
  }
  deviation_at_two_ = deviation_table_.back();
}

double RadialSolution::f(double r) const { return f_eval(profile_, r); }

// Piecewise 20-point Gauss-Legendre on fixed panels. While the table is
// being built, the call integrates over a single panel ending at s.
double RadialSolution::excess_mass_inner(double s) const {
  const double power = profile_.n - 1 - profile_.zeta_value();
  auto g = [power](double t) { return std::pow(t, power) * smooth_step(t); };
  using GL = boost::math::quadrature::gauss<double, 20>;
  if (inner_table_.empty() || inner_table_.back() == 0.0) {
    return GL::integrate(g, s - 1.0 / kInnerPanels, s);
  }
  const int i = std::min(kInnerPanels - 1, static_cast<int>((s - 1.0) * kInnerPanels));
  const double a = 1.0 + static_cast<double>(i) / kInnerPanels;
  return inner_table_[i] + (s > a ? GL::integrate(g, a, s) : 0.0);
}

double RadialSolution::excess_mass(double s) const {
  if (profile_.force_constant || s <= 1.0) return 0.0;
  if (s <= 2.0) return excess_mass_inner(s);
  if (profile_.log_squared_regime()) return std::log(s) + tail_constant_;
  const double zeta = profile_.zeta_value();
  return std::pow(s, profile_.n - zeta) / (profile_.n - zeta) + tail_constant_;
}

double RadialSolution::mass(double s) const {
  if (s < 0.0) throw InvalidArgument("mass_integral requires s >= 0");
  return std::pow(s, profile_.n) / profile_.n + excess_mass(s);
}

// s * ((1 + n e(s) / s^n)^{1/n} - 1), the integrand of u(r) - r^2/2.
double RadialSolution::deviation_integrand(double s) const {
  const int n = profile_.n;
  double eps = 0.0;
  if (s > 2.0) {
    if (profile_.log_squared_regime()) {
      eps = 2.0 * (std::log(s) + tail_constant_) / (s * s);
    } else {
      const double zeta = profile_.zeta_value();
      eps = n / (n - zeta) * std::pow(s, -zeta) + n * tail_constant_ * std::pow(s, -n);
    }
  } else {
    eps = n * excess_mass(s) / std::pow(s, n);
  }
  return s * std::expm1(std::log1p(eps) / n);
}

double RadialSolution::deviation(double r) const {
  if (r < 0.0) throw InvalidArgument("u_radial requires r >= 0");
  if (profile_.force_constant || r <= 1.0) return 0.0;
  auto integrand = [this](double s) { return deviation_integrand(s); };
  if (r <= 2.0) {
    using GL = boost::math::quadrature::gauss<double, 20>;
    const int i = std::min(kInnerPanels - 1, static_cast<int>((r - 1.0) * kInnerPanels));
    const double a = 1.0 + static_cast<double>(i) / kInnerPanels;
    return deviation_table_[i] + (r > a ? GL::integrate(integrand, a, r) : 0.0);
  }
  return deviation_at_two_ + quad::integrate_dyadic(integrand, 2.0, r, profile_.quad_tol).value;
}

double RadialSolution::u(double r) const { return 0.5 * r * r + deviation(r); }

double RadialSolution::du(double r) const {
  if (r < 0.0) throw InvalidArgument("du_radial requires r >= 0");
  if (r == 0.0) return 0.0;
  const int n = profile_.n;
  return r * std::exp(std::log1p(n * excess_mass(r) / std::pow(r, n)) / n);
}

double RadialSolution::d2u(double r) const {
  if (!(r > 0.0))
    throw InvalidArgument("d2u_radial is defined for r > 0 (limit at 0 is f(0)^{1/n})");
  return f(r) * std::pow(r / du(r), profile_.n - 1);
}

double f_eval(const RadialProfile& profile, double r) {
  if (r < 0.0) throw InvalidArgument("f_eval requires r >= 0");
  if (profile.force_constant || r <= 1.0) return 1.0;
  const double decay = std::pow(r, -profile.zeta_value());
  if (r >= 2.0) return 1.0 + decay;
  return 1.0 + smooth_step(r) * decay;
}

double mass_integral(const RadialProfile& profile, double s) {
  return RadialSolution(profile).mass(s);
}

double u_radial(const RadialProfile& profile, double r) { return RadialSolution(profile).u(r); }

double du_radial(const RadialProfile& profile, double r) { return RadialSolution(profile).du(r); }

double d2u_radial(const RadialProfile& profile, double r) {
  return RadialSolution(profile).d2u(r);
}

}  // namespace malab::radial
