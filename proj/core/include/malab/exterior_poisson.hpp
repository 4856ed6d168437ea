#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "malab/sphere.hpp"

namespace malab::poisson {

using Point = Eigen::VectorXd;
using SourceFn = std::function<double(const Point&)>;

/// Right-hand side g of Laplace v = g outside the unit ball, with the
/// envelope ||g(r .)||_{L2(sphere)} <= c0 r^-k1 (ln r)^k2 for r > e.
struct SourceSpec {
  std::string name;
  int n = 3;
  double k1 = 1.0;
  double k2 = 0.0;
  double c0 = 1.0;
  SourceFn g;

  void validate() const;
};

/// Log-spaced radial grid r_i = r_min 2^(i / per_octave); node values are
/// computed from the exponent, so powers of two land exactly on nodes.
std::vector<double> log_grid(double r_min, double r_max, int per_octave);

/// Sphere L2 norm of g(r .).
double sphere_norm(const SourceSpec& spec, double r, int L);

/// Throws CertificationFailure naming the first grid radius r > e at which
/// the sampled sphere norm exceeds the declared envelope.
void check_envelope(const SourceSpec& spec, const std::vector<double>& radii, int L);

struct HarmonicField {
  int n = 3;
  int L = 8;
  std::vector<double> grid;
  std::vector<sphere::Mode> modes;
  std::vector<std::vector<double>> coeffs;  ///< coeffs[mode][i] = b_{k,m}(grid[i])
  std::vector<double> norm_squared;         ///< sphere integral of g(r_i .)^2
  std::vector<double> captured_fraction;    ///< sum_k,m b^2 / norm_squared (1 if g = 0 there)
};

HarmonicField project(const SourceSpec& spec, int L, const std::vector<double>& grid);

enum class Branch { infinite_lower_limit, finite_lower_limit };

struct ModeOptions {
  double tail_tol = 1e-12;     ///< remainder target relative to the envelope tail at the hull
  double tail_log_max = 700;   ///< never integrate past r = e^tail_log_max
};

/// a_{k,m} with first and second derivatives on the grid.
struct RadialModeSolution {
  int k = 0;
  int m = 1;
  std::vector<double> grid;
  std::vector<double> a, da, d2a;
  std::vector<double> b;    ///< source coefficient at the nodes
  Branch branch = Branch::finite_lower_limit;         ///< integral of tau^{1-k} b
  Branch second_branch = Branch::finite_lower_limit;  ///< integral of tau^{k+n-1} b
  double tail_error = 0.0;  ///< envelope bound on integrals dropped beyond the last tail radius
  double tail_radius = 0.0;
};

/// Radial profile b(r) of one mode together with its envelope.
struct RadialSource {
  std::function<double(double)> b;
  double c0 = 1.0;
  double k1 = 1.0;
  double k2 = 0.0;
};

/// Solves a'' + (n-1)/r a' - k(k+n-2)/r^2 a = b by variation of parameters.
/// The integral of tau^{1-k} b starts at infinity iff k + k1 > 2, otherwise at
/// 2; the integral of tau^{k+n-1} b starts at infinity iff k1 > k + n.
RadialModeSolution solve_radial_mode(int n, int k, const RadialSource& source,
                                     const std::vector<double>& grid,
                                     const ModeOptions& options = {});

/// Largest fourth-order FD residual of the mode ODE (written in t = ln r and
/// multiplied by r^2) at interior nodes, relative to the sum of the magnitudes
/// of its terms there plus `floor`.
double mode_ode_residual(int n, const RadialModeSolution& mode, double floor = 0.0);

struct SolveOptions {
  int L = 8;
  double r_min = 1.0;
  double r_max = 4096.0;
  int per_octave = 64;
  ModeOptions mode;
};

/// Superposition v = sum a_{k,m}(r) Y_{k,m}(theta) with C^2 piecewise-quintic
/// interpolation of each a in r.
class ExteriorSolution {
 public:
  ExteriorSolution(int n, int L, std::vector<RadialModeSolution> modes);

  int n() const { return n_; }
  const sphere::Basis& basis() const { return basis_; }
  const std::vector<RadialModeSolution>& modes() const { return modes_; }
  const std::vector<double>& grid() const { return grid_; }

  double r_min() const { return grid_.front(); }
  double r_max() const { return grid_.back(); }

  /// Throws InvalidArgument when |x| is outside the grid hull.
  double value(const Point& x) const;
  /// Radial coefficient a_{k,m}(r) of one mode, interpolated.
  double mode_value(std::size_t mode, double r) const;

  /// Centred FD Laplacian with step h, of order 2 or 4.
  double fd_laplacian(const Point& x, double h, int order = 2) const;
  Point fd_gradient(const Point& x, double h) const;
  Eigen::MatrixXd fd_hessian(const Point& x, double h) const;

 private:
  int n_;
  sphere::Basis basis_;
  std::vector<RadialModeSolution> modes_;
  std::vector<double> grid_;
  double per_octave_ = 0.0;
};

struct ExteriorResult {
  HarmonicField field;
  ExteriorSolution solution;
};

/// Projects g, solves every mode and assembles the reconstruction.
ExteriorResult solve_exterior(const SourceSpec& spec, const SolveOptions& options = {});

/// Assembles v from solved modes sharing one grid.
ExteriorSolution reconstruct(int n, int L, std::vector<RadialModeSolution> modes);

struct LaplacianCheck {
  double max_relative_error = 0.0;
  double worst_radius = 0.0;
  int points = 0;
};

/// Discrete Laplacian of v against g at grid nodes at least `margin` cells
/// from the hull, on `directions` sphere points per node; errors are relative
/// to the sphere maximum of |g| at that radius. Every `stride`-th node is used;
/// the FD step is rel_step * r with a stencil of the given order.
LaplacianCheck laplacian_check(const ExteriorSolution& v, const SourceFn& g, int directions = 8,
                               int stride = 4, int margin = 2, double rel_step = 2e-3,
                               int order = 4);

/// Exponent of ln r in the growth bound for (n, k1, k2).
int log_exponent(int n, double k1, double k2);

struct DecayCertificate {
  double measured_C = 0.0;
  int k_log = 0;
  double top_octave_increase = 0.0;  ///< relative change of the scaled bound over the top octave
  double allowed_increase = 0.0;
  int octaves = 0;
  bool passed = false;
  std::vector<double> radii;
  std::vector<double> scaled;  ///< sup|v| r^{k1-2} (ln r)^{-k_log} per radius
};

/// Dyadic-radius samples (r, sup over the sphere of |v(r .)|).
struct DecaySample {
  double r = 0.0;
  double sup_abs = 0.0;
};

/// sup |v| on dyadic radii of the hull (those above e).
std::vector<DecaySample> dyadic_sup_samples(const ExteriorSolution& v, int directions = 64);

/// Certifies |v| <= C r^{2-k1} (ln r)^k_log. With k_log_override >= 0 the
/// table value is replaced (used to show that dropping a log fails).
DecayCertificate certify_decay(const std::vector<DecaySample>& samples, int n, double k1, double k2,
                               int k_log_override = -1);

/// FD derivatives up to `order` (1 or 2) obey |D^j v| <= C r^{2-k1-j} (ln r)^k_log.
std::vector<DecayCertificate> certify_derivative_decay(const ExteriorSolution& v, int order,
                                                       double k1, double k2,
                                                       int directions = 32);

/// Mode blocks as CSV: columns k, m, r, b, a, da.
void write_modes_csv(std::ostream& out, const ExteriorSolution& v);

}  // namespace malab::poisson
