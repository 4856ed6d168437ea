#include "malab/quad_extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <boost/math/tools/roots.hpp>

#include "malab/csv.hpp"
#include "malab/errors.hpp"
#include "malab/sphere.hpp"

namespace malab::extract {
namespace {

void check_sample(const ConvexSample& s) {
  if (s.n != 2 && s.n != 3) throw InvalidArgument("quadratic extraction supports n = 2, 3");
  if (!s.u) throw InvalidArgument("convex sample has no evaluator");
  if (!(s.f_infinity > 0.0)) throw InvalidArgument("f_infinity must be positive");
}

Vector gradient_at(const ConvexSample& s, const Vector& x) {
  if (s.gradient) return s.gradient(x);
  const double h = 1e-4 * std::max(1.0, x.norm());
  Vector g(s.n);
  for (int d = 0; d < s.n; ++d) {
    Vector p = x, q = x;
    p(d) += h;
    q(d) -= h;
    g(d) = (s.u(p) - s.u(q)) / (2.0 * h);
  }
  return g;
}

}  // namespace

ConvexityReport check_midpoint_convexity(const ConvexSample& sample, double radius, int trials,
                                         double tol, unsigned seed) {
  check_sample(sample);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-radius, radius);
  ConvexityReport rep;
  for (int t = 0; t < trials; ++t) {
    Vector x(sample.n), y(sample.n);
    for (int d = 0; d < sample.n; ++d) {
      x(d) = coord(rng);
      y(d) = coord(rng);
    }
    const double ux = sample.u(x), uy = sample.u(y), um = sample.u(0.5 * (x + y));
    const double scale = std::max({1.0, std::abs(ux), std::abs(uy)});
    rep.worst_violation = std::max(rep.worst_violation, (um - 0.5 * (ux + uy)) / scale);
    ++rep.trials;
  }
  rep.passed = rep.worst_violation <= tol;
  return rep;
}

Vector locate_minimum(const ConvexSample& sample, double tol) {
  check_sample(sample);
  Vector x = Vector::Zero(sample.n);
  double fx = sample.u(x);
  double step = 1.0;
  for (int it = 0; step > tol; ++it) {
    if (it > 1000000) throw NumericalFailure("minimum search did not settle");
    bool moved = false;
    for (int d = 0; d < sample.n && !moved; ++d) {
      for (double sgn : {1.0, -1.0}) {
        Vector y = x;
        y(d) += sgn * step;
        const double fy = sample.u(y);
        if (fy < fx) {
          x = y;
          fx = fy;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return x;
}

std::vector<Vector> ray_directions(int n, int count) {
  if (count == 0) count = n == 2 ? 64 : 266;
  return sphere::spread_directions(n, count);
}

std::vector<Vector> sublevel_boundary(const ConvexSample& sample, double M, int n_rays,
                                      const std::optional<Vector>& origin) {
  check_sample(sample);
  const Vector o = origin ? *origin : locate_minimum(sample);
  if (n_rays != 0 && n_rays < 2 * sample.n + 2)
    throw InvalidArgument("sublevel_boundary needs at least 2n + 2 rays");
  const double u0 = sample.u(o);
  if (!(M > u0)) throw InvalidArgument("level M must exceed the minimum value");
  std::vector<Vector> out;
  for (const Vector& theta : ray_directions(sample.n, n_rays)) {
    auto phi = [&](double rho) { return sample.u(o + rho * theta) - M; };
    double lo = 0.0, hi = 1.0;
    double flo = u0 - M, fhi = phi(hi);
    while (fhi < 0.0) {
      lo = hi;
      flo = fhi;
      hi *= 2.0;
      if ((o + hi * theta).norm() > 2.0 * sample.domain_radius)
        throw InvalidArgument("ray leaves the domain radius before reaching level " +
                              format_double(M));
      fhi = phi(hi);
    }
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        phi, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
    const Vector p = o + 0.5 * (a + b) * theta;
    if (p.norm() > sample.domain_radius)
      throw InvalidArgument("level " + format_double(M) + " boundary lies outside the domain radius");
    out.push_back(p);
  }
  return out;
}

int default_ladder_depth(const Rational& zeta) {
  if (!(zeta > Rational(0))) throw InvalidArgument("zeta must be positive");
  return std::max(20, static_cast<int>(std::ceil(20.0 / zeta.to_double())));
}

ExtractAResult extract_A(const ConvexSample& sample, const ExtractOptions& opt) {
  check_sample(sample);
  if (!(opt.M0 > 0.0) || opt.K < 1) throw InvalidArgument("ladder needs M0 > 0 and K >= 1");
  ExtractAResult res;
  res.minimum = locate_minimum(sample);
  const double umin = sample.u(res.minimum);
  for (int k = 0; k <= opt.K; ++k) {
    const double Mk = opt.M0 * std::ldexp(1.0, k);
    const auto pts = sublevel_boundary(sample, umin + Mk, opt.n_rays, res.minimum);
    EllipsoidFit fit = geometry::mve_ellipsoid(pts, opt.mve_eps);
    fit.level = Mk;
    res.levels.push_back(Mk);
    res.shapes.push_back(2.0 * Mk * fit.shape);
    if (k > 0) res.steps.push_back((res.shapes[k] - res.shapes[k - 1]).norm());
    res.fits.push_back(std::move(fit));
  }
  const Matrix& S = res.shapes.back();
  res.cauchy_drift = res.steps.back() / S.norm();
  res.det_before = S.determinant();
  const double n = sample.n;
  res.A = std::pow(sample.f_infinity, 1.0 / n) * std::pow(res.det_before, -1.0 / n) * S;
  res.A = 0.5 * (res.A + res.A.transpose());
  if (res.cauchy_drift > opt.cauchy_tol)
    throw CertificationFailure("sublevel shapes not settled: Cauchy drift " +
                               format_double(res.cauchy_drift) + " > " +
                               format_double(opt.cauchy_tol));
  return res;
}

ExtractBResult extract_b(const ConvexSample& sample, const Matrix& A,
                         const std::vector<double>& sphere_radii, double zeta, double b_drift_tol,
                         int directions) {
  check_sample(sample);
  ExtractBResult res;
  if (zeta <= 1.0) {
    res.message = "no linear term resolvable for zeta <= 1";
    return res;
  }
  if (sphere_radii.size() < 2) throw InvalidArgument("extract_b needs at least two radii");
  // Antipodally symmetric direction set.
  std::vector<Vector> dirs;
  for (const auto& d : ray_directions(sample.n, directions ? directions / 2 : 0)) {
    dirs.push_back(d);
    dirs.push_back(-d);
  }
  for (double rho : sphere_radii) {
    Vector acc = Vector::Zero(sample.n);
    for (const auto& d : dirs) {
      const Vector x = rho * d;
      acc += gradient_at(sample, x) - A * x;
    }
    res.radii.push_back(rho);
    res.per_radius.push_back(acc / static_cast<double>(dirs.size()));
  }
  res.b = res.per_radius.back();
  res.drift = (res.per_radius.back() - res.per_radius[res.per_radius.size() - 2]).norm();
  if (res.drift > b_drift_tol)
    throw CertificationFailure("linear term drifts by " + format_double(res.drift) +
                               " between the two largest radii");
  res.resolvable = true;
  res.message = "ok";
  return res;
}

Vector generic_direction(int n) {
  Vector e(n);
  const double vals[3] = {1.0, std::numbers::sqrt2 - 1.0, 0.5 * (std::sqrt(5.0) - 1.0)};
  for (int i = 0; i < n; ++i) e(i) = vals[i % 3];
  return e.normalized();
}

rates::RateFitResult verify_rates(const ConvexSample& sample, const Matrix& A,
                                  const std::optional<Vector>& b, const std::vector<double>& radii,
                                  const rates::FitOptions& fit) {
  check_sample(sample);
  const Vector e = generic_direction(sample.n);
  std::vector<rates::Sample> samples;
  for (double r : radii) {
    const Vector x = r * e;
    double w = sample.u(x) - 0.5 * x.dot(A * x);
    if (b) w -= b->dot(x);
    samples.push_back({r, w});
  }
  return rates::fit_rate(samples, fit);
}

RateWindow default_rate_window(const Rational& zeta) {
  if (zeta == Rational(2)) return {std::ldexp(1.0, 10), std::ldexp(1.0, 20), 4};
  return {std::ldexp(1.0, 16), std::ldexp(1.0, 26), 4};
}

RateLaw predicted_rate(int n, const Rational& zeta) {
  if (!(zeta > Rational(0)) || zeta > Rational(2))
    throw InvalidArgument("zeta must lie in (0, 2]");
  if (zeta == Rational(2)) return {0.0, n == 2 ? 2 : 1, true};
  if (zeta == Rational(1)) return {1.0, 1, false};
  return {2.0 - zeta.to_double(), 0, true};
}

ConvexSample radial_oracle(const OracleSpec& spec) {
  auto sol = std::make_shared<radial::RadialSolution>(spec.profile);
  const int n = spec.profile.n;
  if (n != 2 && n != 3) throw InvalidArgument("radial oracle supports n = 2, 3");
  if (!(spec.f_infinity > 0.0)) throw InvalidArgument("f_infinity must be positive");
  const Matrix T = spec.T.size() ? spec.T : Matrix::Identity(n, n);
  const Vector x0 = spec.x0.size() ? spec.x0 : Vector::Zero(n);
  if (T.rows() != n || T.cols() != n || x0.size() != n)
    throw InvalidArgument("oracle affine map has the wrong dimension");
  const double detT = T.determinant();
  if (std::abs(detT) < 1e-12) throw InvalidArgument("oracle affine map is singular");
  const double s = std::pow(spec.f_infinity, 1.0 / n);

  ConvexSample out;
  out.n = n;
  out.f_infinity = spec.f_infinity * detT * detT;
  out.domain_radius = std::numeric_limits<double>::infinity();
  out.u = [sol, T, x0, s](const Vector& x) { return s * sol->u((T * (x - x0)).norm()); };
  out.gradient = [sol, T, x0, s](const Vector& x) -> Vector {
    const Vector y = T * (x - x0);
    const double rho = y.norm();
    if (rho == 0.0) return Vector::Zero(x.size());
    return s * (T.transpose() * y) * (sol->du(rho) / rho);
  };
  return out;
}

}  // namespace malab::extract
