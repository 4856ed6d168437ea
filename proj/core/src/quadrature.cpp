#include "malab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "malab/errors.hpp"

namespace malab::quad {

Estimate integrate(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth) {
  if (a == b) return {};
  // Integrate over [0, 1]: on short intervals far from the origin the node
  // positions a + h x are rounded, and that noise in the Kronrod error
  // estimate otherwise forces refinement down to max_depth.
  const double h = b - a;
  auto g = [&](double t) { return f(a + h * t); };
  double error = 0.0;
  const double value = h * boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
                               g, 0.0, 1.0, max_depth, rel_tol, &error);
  if (!std::isfinite(value)) throw NumericalFailure("quadrature produced a non-finite value");
  return {value, std::abs(h) * error};
}

Estimate integrate_split(const Integrand& f, double a, double b, std::span<const double> knots,
                         double rel_tol, unsigned max_depth) {
  std::vector<double> cuts{a};
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> inner;
  for (double k : knots)
    if (k > lo && k < hi) inner.push_back(k);
  std::sort(inner.begin(), inner.end());
  if (b < a) std::reverse(inner.begin(), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(b);
  Estimate total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Estimate piece = integrate(f, cuts[i], cuts[i + 1], rel_tol, max_depth);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

Estimate integrate_dyadic(const Integrand& f, double a, double b, double rel_tol) {
  if (!(a > 0.0) || b < a) throw InvalidArgument("integrate_dyadic requires 0 < a <= b");
  Estimate total;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(2.0 * lo, b);
    const Estimate piece = integrate(f, lo, hi, rel_tol);
    total.value += piece.value;
    total.error += piece.error;
    lo = hi;
  }
  return total;
}

const FixedRule& kronrod15() {
  static const FixedRule rule = [] {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const auto& x = GK::abscissa();
    const auto& w = GK::weights();
    FixedRule r;
    // Boost stores the non-negative half (x[0] = 0).
    std::size_t idx = 0;
    for (std::size_t i = x.size(); i-- > 1;) {
      r.nodes[idx] = -x[i];
      r.weights[idx] = w[i];
      ++idx;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.nodes[idx] = x[i];
      r.weights[idx] = w[i];
      ++idx;
    }
    return r;
  }();
  return rule;
}

}  // namespace malab::quad
