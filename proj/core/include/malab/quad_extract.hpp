#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "malab/mve.hpp"
#include "malab/radial_lab.hpp"
#include "malab/rate_fit.hpp"

namespace malab::extract {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using geometry::EllipsoidFit;

/// A convex function on R^n known only through evaluation.
struct ConvexSample {
  int n = 2;
  std::function<double(const Vector&)> u;
  std::function<Vector(const Vector&)> gradient;  ///< optional
  double f_infinity = 1.0;
  double domain_radius = 1e7;
};

struct ConvexityReport {
  double worst_violation = 0.0;  ///< max of u(mid) - (u(x) + u(y))/2, relative to max |u|
  int trials = 0;
  bool passed = false;
};

/// Midpoint convexity on random pairs drawn from the ball of radius `radius`.
ConvexityReport check_midpoint_convexity(const ConvexSample& sample, double radius, int trials = 200,
                                         double tol = 1e-10, unsigned seed = 12345);

/// Minimizer by coordinate descent from the origin with halving steps.
Vector locate_minimum(const ConvexSample& sample, double tol = 1e-8);

/// Unit directions used for the rays: 64 equispaced angles for n = 2, a
/// 266-point Fibonacci sphere for n = 3 (default count 0).
std::vector<Vector> ray_directions(int n, int count = 0);

/// Points where u = M along rays from `origin` (the located minimum if
/// empty), by bracketing root finding.
std::vector<Vector> sublevel_boundary(const ConvexSample& sample, double M, int n_rays = 0,
                                      const std::optional<Vector>& origin = std::nullopt);

struct ExtractOptions {
  double M0 = 100.0;
  int K = 10;
  int n_rays = 0;             ///< 0: default for the dimension
  double mve_eps = 1e-13;     ///< tight: A feeds residuals of size |x|^2 * error
  double cauchy_tol = 1e-3;
};

struct ExtractAResult {
  Matrix A;
  std::vector<double> levels;
  std::vector<Matrix> shapes;   ///< normalized S_k = 2 M_k Q_k
  std::vector<double> steps;    ///< ||S_k - S_{k-1}||_F
  double cauchy_drift = 0.0;    ///< ||S_K - S_{K-1}||_F / ||S_K||_F
  double det_before = 0.0;      ///< det S_K scaled like A, i.e. before renormalization
  Vector minimum;
  std::vector<EllipsoidFit> fits;
};

/// Ladder depth max(20, ceil(20 / zeta)). The normalized shapes approach
/// their limit like M^(-zeta/2), so small zeta needs many more doublings.
int default_ladder_depth(const Rational& zeta);

/// Quadratic term from the normalized sublevel ellipsoids. Throws
/// CertificationFailure when the Cauchy drift exceeds cauchy_tol.
ExtractAResult extract_A(const ConvexSample& sample, const ExtractOptions& options = {});

struct ExtractBResult {
  bool resolvable = false;
  Vector b;
  double drift = 0.0;  ///< |b(largest radius) - b(next radius)|
  std::vector<double> radii;
  std::vector<Vector> per_radius;
  std::string message;
};

/// Linear term as the sphere average of Du - A x on each radius; the value
/// from the largest radius is returned. For zeta <= 1 nothing is computed and
/// the result reports that no linear term is resolvable.
ExtractBResult extract_b(const ConvexSample& sample, const Matrix& A,
                         const std::vector<double>& sphere_radii, double zeta,
                         double b_drift_tol = 1e-2, int directions = 0);

/// Fixed generic unit direction used by verify_rates.
Vector generic_direction(int n);

/// Rate law of u - x^T A x / 2 - [b.x when zeta > 1] along a generic ray.
rates::RateFitResult verify_rates(const ConvexSample& sample, const Matrix& A,
                                  const std::optional<Vector>& b, const std::vector<double>& radii,
                                  const rates::FitOptions& fit = {});

/// Radii for verify_rates: [2^10, 2^20] for zeta = 2, where errors in A of
/// order 1e-13 |x|^2 would soon swamp ln r; [2^16, 2^26] otherwise, far enough
/// out that the subleading ln r and constant terms no longer bias the fit.
struct RateWindow {
  double r_min = 0.0;
  double r_max = 0.0;
  int per_octave = 4;
};
RateWindow default_rate_window(const Rational& zeta);

/// Expected growth law (gamma, p) of the remainder; zeta = 1 is not gated
/// because only an upper bound is known there.
struct RateLaw {
  double gamma = 0.0;
  int p = 0;
  bool gated = true;
};
RateLaw predicted_rate(int n, const Rational& zeta);

/// Radial oracle u(x) = s v(T (x - x0)) with v the exact radial solution and
/// s = f_infinity^{1/n}; det D^2 u tends to f_infinity det(T)^2. The oracle is
/// defined everywhere, so its domain radius is unbounded.
struct OracleSpec {
  radial::RadialProfile profile;
  Matrix T;          ///< identity if empty
  Vector x0;         ///< zero if empty
  double f_infinity = 1.0;
};

ConvexSample radial_oracle(const OracleSpec& spec);

}  // namespace malab::extract
