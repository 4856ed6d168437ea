#pragma once

#include <array>
#include <functional>
#include <span>

namespace malab::quad {

/// Value and error estimate of a definite integral.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

using Integrand = std::function<double(double)>;

/// Adaptive 21-point Gauss-Kronrod integration of f over [a, b], refined until
/// the error estimate falls below rel_tol times the L1 norm of the integrand.
Estimate integrate(const Integrand& f, double a, double b, double rel_tol,
                   unsigned max_depth = 18);

/// Integral over [a, b] split at the given interior knots (each handled
/// adaptively). Knots outside (a, b) are ignored.
Estimate integrate_split(const Integrand& f, double a, double b, std::span<const double> knots,
                         double rel_tol, unsigned max_depth = 18);

/// Integral over [a, b] with b/a large, split on a dyadic ladder a, 2a, 4a, ...
/// Requires 0 < a <= b.
Estimate integrate_dyadic(const Integrand& f, double a, double b, double rel_tol);

/// Fixed (non-adaptive) 15-point Kronrod rule on [-1, 1]: nodes and weights,
/// full symmetric set of 15 points.
struct FixedRule {
  std::array<double, 15> nodes{};
  std::array<double, 15> weights{};
};
const FixedRule& kronrod15();

}  // namespace malab::quad
