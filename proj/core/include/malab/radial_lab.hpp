#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "malab/keyvalue.hpp"
#include "malab/rational.hpp"

namespace malab::radial {

/// Radially symmetric source f(r) = 1 + chi(r) r^-zeta of det D^2 u = f,
/// where chi is the C-infinity step that vanishes on [0, 1] and equals one
/// on [2, inf). With force_constant the source is f = 1 everywhere.
struct RadialProfile {
  int n = 3;
  Rational zeta{1, 2};
  double quad_tol = 1e-10;
  bool force_constant = false;

  double zeta_value() const { return zeta.to_double(); }
  /// True for the borderline zeta == n (only possible as n = zeta = 2).
  bool log_squared_regime() const { return !force_constant && zeta == Rational(n); }

  /// Throws InvalidArgument unless n >= 2, 0 < zeta <= 2, quad_tol > 0.
  void validate() const;

  KeyValueDoc to_doc() const;
  static RadialProfile from_doc(const KeyValueDoc& doc);
};

/// Smooth partition chi(t) = s(t-1) / (s(t-1) + s(2-t)), s(x) = exp(-1/x) for x > 0.
double smooth_step(double t);

/// Precomputed exact radial solution of det D^2 u = f for one profile.
///
/// The solution u(r) = n^{1/n} int_0^r (int_0^s t^{n-1} f dt)^{1/n} ds is
/// stored through its deviation d(r) = u(r) - r^2/2, integrated directly
/// (no r^2 cancellation), so u - r^2/2 keeps full relative precision at any
/// radius.
class RadialSolution {
 public:
  explicit RadialSolution(RadialProfile profile);

  const RadialProfile& profile() const { return profile_; }

  double f(double r) const;
  /// int_0^s t^{n-1} f(t) dt.
  double mass(double s) const;
  /// mass(s) - s^n / n.
  double excess_mass(double s) const;
  double u(double r) const;
  /// u(r) - r^2 / 2.
  double deviation(double r) const;
  double du(double r) const;
  /// Second radial derivative; requires r > 0.
  double d2u(double r) const;

  /// C0 = int_0^2 t^{n-1} f - 2^n/n - 2^{n-zeta}/(n-zeta) when zeta < n,
  /// C3 = int_0^2 t f - 2 - ln 2 when zeta = n = 2, and 0 in constant mode.
  double tail_constant() const { return tail_constant_; }

 private:
  double excess_mass_inner(double s) const;  // s in [1, 2]
  double deviation_integrand(double s) const;

  RadialProfile profile_;
  double tail_constant_ = 0.0;
  double deviation_at_two_ = 0.0;
  std::vector<double> inner_table_;      // excess mass at the panel edges of [1, 2]
  std::vector<double> deviation_table_;  // u - r^2/2 at the same edges
};

// Free-function forms; each builds a RadialSolution, so prefer the class
// when evaluating many radii.
double f_eval(const RadialProfile& profile, double r);
double mass_integral(const RadialProfile& profile, double s);
double u_radial(const RadialProfile& profile, double r);
double du_radial(const RadialProfile& profile, double r);
double d2u_radial(const RadialProfile& profile, double r);

}  // namespace malab::radial
