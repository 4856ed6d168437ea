#include "malab/exterior_poisson.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "malab/csv.hpp"
#include "malab/errors.hpp"
#include "malab/quadrature.hpp"

namespace malab::poisson {
namespace {

constexpr double kE = 2.718281828459045;

bool is_natural(double x) {  // 0, 1, 2, ...
  const double r = std::round(x);
  return r >= 0.0 && std::abs(x - r) < 1e-12;
}

// c0 * int_T^inf tau^{-1-s} (ln tau)^q dtau = c0 s^{-q-1} Gamma(q+1, s ln T).
double envelope_tail(double c0, double s, double q, double T) {
  return c0 * std::pow(s, -q - 1.0) * boost::math::tgamma(q + 1.0, s * std::log(T));
}

struct TailResult {
  double value = 0.0;
  double error = 0.0;
  double radius = 0.0;
};

// int_{R}^{inf} h(tau) dtau in t = ln tau, panels of width 1/4 with a fixed
// 15-point Kronrod rule, until the envelope remainder is small enough.
TailResult integrate_tail(const std::function<double(double)>& h, double R, double c0, double s,
                          double q, const ModeOptions& opt) {
  const auto& rule = quad::kronrod15();
  const double target = opt.tail_tol * envelope_tail(c0, s, q, R);
  TailResult out;
  double t = std::log(R);
  constexpr double width = 0.25;
  while (true) {
    const double mid = t + 0.5 * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double tau = std::exp(mid + 0.5 * width * rule.nodes[i]);
      panel += rule.weights[i] * tau * h(tau);
    }
    out.value += 0.5 * width * panel;
    t += width;
    const double remainder = envelope_tail(c0, s, q, std::exp(t));
    if (remainder <= target || t >= opt.tail_log_max) {
      out.error = remainder;
      out.radius = std::exp(t);
      return out;
    }
  }
}

// b sampled at the grid nodes and at the 15 Kronrod nodes of every interval.
struct SampledMode {
  std::vector<double> at_nodes;
  std::vector<std::array<double, 15>> at_panels;
  std::function<double(double)> b;  // for the tails and the offset to r = 2
};

std::array<double, 15> panel_points(double lo, double hi) {
  const auto& rule = quad::kronrod15();
  std::array<double, 15> x{};
  for (std::size_t i = 0; i < 15; ++i)
    x[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[i];
  return x;
}

std::vector<double> panel_integrals(const std::vector<double>& grid, const SampledMode& s,
                                    const std::function<double(double, double)>& weight) {
  const auto& rule = quad::kronrod15();
  std::vector<double> seg(grid.size() - 1, 0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const auto x = panel_points(grid[i], grid[i + 1]);
    double acc = 0.0;
    for (std::size_t j = 0; j < 15; ++j) acc += rule.weights[j] * weight(x[j], s.at_panels[i][j]);
    seg[i] = 0.5 * (grid[i + 1] - grid[i]) * acc;
  }
  return seg;
}

// Integral from `lower` (2 or +inf) to each grid node.
std::vector<double> running_integral(const std::vector<double>& grid,
                                     const std::vector<double>& seg, bool from_infinity,
                                     double tail, const std::function<double(double)>& h) {
  const std::size_t N = grid.size();
  std::vector<double> I(N, 0.0);
  if (from_infinity) {
    // -(int_r^R + tail), accumulated from the top to avoid cancellation.
    double acc = tail;
    I[N - 1] = -acc;
    for (std::size_t i = N - 1; i-- > 0;) {
      acc += seg[i];
      I[i] = -acc;
    }
    return I;
  }
  I[0] = 0.0;
  for (std::size_t i = 1; i < N; ++i) I[i] = I[i - 1] + seg[i - 1];
  // Shift the origin to r = 2: exactly when 2 is a node, else by quadrature.
  double at_two = 0.0;
  const auto node = std::find(grid.begin(), grid.end(), 2.0);
  if (node != grid.end()) {
    at_two = I[static_cast<std::size_t>(node - grid.begin())];
  } else {
    const std::array<double, 1> knots{2.0};
    at_two = -quad::integrate_split(h, 2.0, grid.front(), knots, 1e-13, 12).value;
  }
  for (double& v : I) v -= at_two;
  return I;
}

RadialModeSolution solve_sampled(int n, int k, int m, const std::vector<double>& grid,
                                 const SampledMode& s, const RadialSource& env,
                                 const ModeOptions& opt) {
  RadialModeSolution out;
  out.k = k;
  out.m = m;
  out.grid = grid;
  out.b = s.at_nodes;
  const std::size_t N = grid.size();
  const int lambda = sphere::eigenvalue(k, n);
  const bool log_pair = (n == 2 && k == 0);
  const double R = grid.back();

  // First integral: tau^{1-k} b (tau b for the (1, ln r) pair as well).
  auto h1 = [&](double tau) { return std::pow(tau, 1.0 - k) * s.b(tau); };
  auto w1 = [k](double tau, double b) { return std::pow(tau, 1.0 - k) * b; };
  // Second integral: tau^{k+n-1} b, or tau ln tau b for the (1, ln r) pair.
  auto h2 = [&](double tau) {
    return log_pair ? tau * std::log(tau) * s.b(tau) : std::pow(tau, k + n - 1.0) * s.b(tau);
  };
  auto w2 = [k, n, log_pair](double tau, double b) {
    return log_pair ? tau * std::log(tau) * b : std::pow(tau, k + n - 1.0) * b;
  };

  const bool inf1 = k + env.k1 > 2.0;
  const bool inf2 = env.k1 > k + n;
  out.branch = inf1 ? Branch::infinite_lower_limit : Branch::finite_lower_limit;
  out.second_branch = inf2 ? Branch::infinite_lower_limit : Branch::finite_lower_limit;

  TailResult t1, t2;
  if (inf1) t1 = integrate_tail(h1, R, env.c0, k + env.k1 - 2.0, env.k2, opt);
  if (inf2)
    t2 = integrate_tail(h2, R, env.c0, env.k1 - k - n, env.k2 + (log_pair ? 1.0 : 0.0), opt);
  out.tail_error = t1.error + t2.error;
  out.tail_radius = std::max(t1.radius, t2.radius);

  const auto I1 = running_integral(grid, panel_integrals(grid, s, w1), inf1, t1.value, h1);
  const auto I2 = running_integral(grid, panel_integrals(grid, s, w2), inf2, t2.value, h2);

  out.a.resize(N);
  out.da.resize(N);
  out.d2a.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = grid[i];
    if (log_pair) {
      out.a[i] = std::log(r) * I1[i] - I2[i];
      out.da[i] = I1[i] / r;
    } else {
      const double c = 1.0 / (2.0 - 2.0 * k - n);
      const double p = 2.0 - k - n;
      out.a[i] = c * std::pow(r, p) * I2[i] - c * std::pow(r, k) * I1[i];
      out.da[i] = c * p * std::pow(r, p - 1.0) * I2[i] - c * k * std::pow(r, k - 1.0) * I1[i];
    }
    out.d2a[i] = out.b[i] - (n - 1.0) / r * out.da[i] + lambda / (r * r) * out.a[i];
  }
  return out;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 4) throw InvalidArgument("radial grid needs at least 4 nodes");
  if (!(grid.front() >= 1.0)) throw InvalidArgument("radial grid must lie in [1, inf)");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("radial grid must be increasing");
}

void check_dimension(int n) {
  if (n != 2 && n != 3) throw InvalidArgument("exterior Poisson solver supports n = 2, 3");
}

Point scaled(const Eigen::VectorXd& theta, double r) { return r * theta; }

struct Projector {
  sphere::Rule rule;
  Eigen::MatrixXd Y;  // nodes x modes, premultiplied by the weights

  Projector(int n, int L) : rule(sphere::quadrature_rule(n, L)) {
    const sphere::Basis basis(n, L);
    Y.resize(static_cast<Eigen::Index>(rule.points.size()),
             static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < rule.points.size(); ++i)
      Y.row(static_cast<Eigen::Index>(i)) = rule.weights[i] * basis.evaluate(rule.points[i]);
  }

  Eigen::VectorXd samples(const SourceFn& g, double r) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(rule.points.size()));
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
      const double val = g(scaled(rule.points[i], r));
      if (!std::isfinite(val))
        throw NumericalFailure("source evaluation failed at radius " + format_double(r));
      v(static_cast<Eigen::Index>(i)) = val;
    }
    return v;
  }
  Eigen::VectorXd coefficients(const SourceFn& g, double r) const {
    return Y.transpose() * samples(g, r);
  }
  double coefficient(const SourceFn& g, double r, Eigen::Index mode) const {
    return Y.col(mode).dot(samples(g, r));
  }
  double norm_squared(const Eigen::VectorXd& v) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.points.size(); ++i)
      acc += rule.weights[i] * v(static_cast<Eigen::Index>(i)) * v(static_cast<Eigen::Index>(i));
    return acc;
  }
};

}  // namespace

void SourceSpec::validate() const {
  check_dimension(n);
  if (!(k1 > 0.0)) throw InvalidArgument("decay exponent k1 must be positive");
  if (!(k2 >= 0.0)) throw InvalidArgument("log power k2 must be non-negative");
  if (!(c0 > 0.0)) throw InvalidArgument("envelope constant c0 must be positive");
  if (!g) throw InvalidArgument("source has no evaluator");
}

std::vector<double> log_grid(double r_min, double r_max, int per_octave) {
  if (!(r_min >= 1.0) || !(r_max > r_min) || per_octave < 1)
    throw InvalidArgument("log_grid needs 1 <= r_min < r_max and per_octave >= 1");
  const int count = static_cast<int>(std::floor(per_octave * std::log2(r_max / r_min) + 1e-9));
  std::vector<double> grid;
  for (int i = 0; i <= count; ++i)
    grid.push_back(r_min * std::exp2(static_cast<double>(i) / per_octave));
  return grid;
}

double sphere_norm(const SourceSpec& spec, double r, int L) {
  const sphere::Rule rule = sphere::quadrature_rule(spec.n, L);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const double v = spec.g(scaled(rule.points[i], r));
    acc += rule.weights[i] * v * v;
  }
  return std::sqrt(acc);
}

void check_envelope(const SourceSpec& spec, const std::vector<double>& radii, int L) {
  spec.validate();
  for (double r : radii) {
    if (r <= kE) continue;
    const double bound = spec.c0 * std::pow(r, -spec.k1) * std::pow(std::log(r), spec.k2);
    const double norm = sphere_norm(spec, r, L);
    if (norm > bound * (1.0 + 1e-9))
      throw CertificationFailure("source '" + spec.name + "' exceeds its envelope at r = " +
                                 format_double(r) + " (norm " + format_double(norm) +
                                 " > bound " + format_double(bound) + ")");
  }
}

HarmonicField project(const SourceSpec& spec, int L, const std::vector<double>& grid) {
  spec.validate();
  check_grid(grid);
  const Projector proj(spec.n, L);
  const sphere::Basis basis(spec.n, L);
  HarmonicField field;
  field.n = spec.n;
  field.L = L;
  field.grid = grid;
  field.modes = basis.modes();
  field.coeffs.assign(basis.size(), std::vector<double>(grid.size(), 0.0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd v = proj.samples(spec.g, grid[i]);
    const Eigen::VectorXd c = proj.Y.transpose() * v;
    for (std::size_t j = 0; j < basis.size(); ++j)
      field.coeffs[j][i] = c(static_cast<Eigen::Index>(j));
    const double total = proj.norm_squared(v);
    field.norm_squared.push_back(total);
    field.captured_fraction.push_back(total > 0.0 ? c.squaredNorm() / total : 1.0);
  }
  return field;
}

RadialModeSolution solve_radial_mode(int n, int k, const RadialSource& source,
                                     const std::vector<double>& grid, const ModeOptions& options) {
  check_dimension(n);
  check_grid(grid);
  if (k < 0) throw InvalidArgument("mode degree must be >= 0");
  if (!(source.k1 > 0.0)) throw InvalidArgument("decay exponent k1 must be positive");
  if (!source.b) throw InvalidArgument("radial source has no evaluator");
  SampledMode s;
  s.b = source.b;
  for (double r : grid) s.at_nodes.push_back(source.b(r));
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    std::array<double, 15> vals{};
    const auto x = panel_points(grid[i], grid[i + 1]);
    for (std::size_t j = 0; j < 15; ++j) vals[j] = source.b(x[j]);
    s.at_panels.push_back(vals);
  }
  return solve_sampled(n, k, 1, grid, s, source, options);
}

double mode_ode_residual(int n, const RadialModeSolution& mode, double floor) {
  const auto& g = mode.grid;
  const int lambda = sphere::eigenvalue(mode.k, n);
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < g.size(); ++i) {
    const double dt = std::log(g[i + 1] / g[i]);
    const auto& a = mode.a;
    const double at = (-a[i + 2] + 8.0 * a[i + 1] - 8.0 * a[i - 1] + a[i - 2]) / (12.0 * dt);
    const double att =
        (-a[i + 2] + 16.0 * a[i + 1] - 30.0 * a[i] + 16.0 * a[i - 1] - a[i - 2]) / (12.0 * dt * dt);
    // r^2 a'' + (n-1) r a' - lambda a = r^2 b, i.e. a_tt + (n-2) a_t - lambda a = r^2 b.
    const double rb = g[i] * g[i] * mode.b[i];
    const double res = att + (n - 2.0) * at - lambda * a[i] - rb;
    const double scale =
        std::abs(att) + std::abs((n - 2.0) * at) + std::abs(lambda * a[i]) + std::abs(rb) + floor;
    if (scale > 0.0) worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

ExteriorSolution::ExteriorSolution(int n, int L, std::vector<RadialModeSolution> modes)
    : n_(n), basis_(n, L), modes_(std::move(modes)) {
  if (modes_.empty()) throw InvalidArgument("reconstruction needs at least one mode");
  grid_ = modes_.front().grid;
  check_grid(grid_);
  for (const auto& m : modes_) {
    if (m.grid != grid_) throw InvalidArgument("modes must share one radial grid");
    basis_.index(m.k, m.m);  // validates the mode
  }
  per_octave_ = 1.0 / std::log2(grid_[1] / grid_[0]);
}

double ExteriorSolution::mode_value(std::size_t mode, double r) const {
  const std::size_t N = grid_.size();
  if (r < grid_.front() * (1.0 - 1e-13) || r > grid_.back() * (1.0 + 1e-13))
    throw InvalidArgument("radius " + format_double(r) + " outside the grid hull [" +
                          format_double(grid_.front()) + ", " + format_double(grid_.back()) + "]");
  long i = static_cast<long>(std::floor(per_octave_ * std::log2(r / grid_.front())));
  i = std::clamp(i, 0L, static_cast<long>(N) - 2);
  while (i > 0 && r < grid_[i]) --i;
  while (i + 2 < static_cast<long>(N) && r > grid_[i + 1]) ++i;
  const auto& md = modes_[mode];
  const double h = grid_[i + 1] - grid_[i];
  const double t = (r - grid_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double H0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double H1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double H2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
  const double H3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  const double H4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double H5 = 0.5 * (t3 - 2.0 * t4 + t5);
  return md.a[i] * H0 + h * md.da[i] * H1 + h * h * md.d2a[i] * H2 + md.a[i + 1] * H3 +
         h * md.da[i + 1] * H4 + h * h * md.d2a[i + 1] * H5;
}

double ExteriorSolution::value(const Point& x) const {
  if (x.size() != n_) throw InvalidArgument("point dimension does not match the solution");
  const double r = x.norm();
  const Eigen::VectorXd Y = basis_.evaluate(x / r);
  double v = 0.0;
  for (std::size_t j = 0; j < modes_.size(); ++j)
    v += mode_value(j, r) *
         Y(static_cast<Eigen::Index>(basis_.index(modes_[j].k, modes_[j].m)));
  return v;
}

double ExteriorSolution::fd_laplacian(const Point& x, double h, int order) const {
  if (order != 2 && order != 4) throw InvalidArgument("FD Laplacian order must be 2 or 4");
  const double c = value(x);
  double acc = 0.0;
  for (int d = 0; d < n_; ++d) {
    auto at = [&](double s) {
      Point p = x;
      p(d) += s * h;
      return value(p);
    };
    if (order == 2)
      acc += (at(1) - 2.0 * c + at(-1)) / (h * h);
    else
      acc += (-at(2) + 16.0 * at(1) - 30.0 * c + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
  }
  return acc;
}

Point ExteriorSolution::fd_gradient(const Point& x, double h) const {
  Point grad(n_);
  for (int d = 0; d < n_; ++d) {
    Point p = x, q = x;
    p(d) += h;
    q(d) -= h;
    grad(d) = (value(p) - value(q)) / (2.0 * h);
  }
  return grad;
}

Eigen::MatrixXd ExteriorSolution::fd_hessian(const Point& x, double h) const {
  Eigen::MatrixXd H(n_, n_);
  const double c = value(x);
  for (int i = 0; i < n_; ++i) {
    Point p = x, q = x;
    p(i) += h;
    q(i) -= h;
    H(i, i) = (value(p) - 2.0 * c + value(q)) / (h * h);
    for (int j = i + 1; j < n_; ++j) {
      Point pp = x, pm = x, mp = x, mm = x;
      pp(i) += h, pp(j) += h;
      pm(i) += h, pm(j) -= h;
      mp(i) -= h, mp(j) += h;
      mm(i) -= h, mm(j) -= h;
      H(i, j) = H(j, i) = (value(pp) - value(pm) - value(mp) + value(mm)) / (4.0 * h * h);
    }
  }
  return H;
}

ExteriorSolution reconstruct(int n, int L, std::vector<RadialModeSolution> modes) {
  return ExteriorSolution(n, L, std::move(modes));
}

ExteriorResult solve_exterior(const SourceSpec& spec, const SolveOptions& options) {
  spec.validate();
  const auto grid = log_grid(options.r_min, options.r_max, options.per_octave);
  check_envelope(spec, grid, options.L);
  HarmonicField field = project(spec, options.L, grid);
  const Projector proj(spec.n, options.L);
  const std::size_t M = field.modes.size();

  std::vector<SampledMode> sampled(M);
  for (std::size_t j = 0; j < M; ++j) {
    sampled[j].at_nodes = field.coeffs[j];
    sampled[j].at_panels.resize(grid.size() - 1);
    const auto idx = static_cast<Eigen::Index>(j);
    sampled[j].b = [&proj, &spec, idx](double r) { return proj.coefficient(spec.g, r, idx); };
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const auto x = panel_points(grid[i], grid[i + 1]);
    for (std::size_t q = 0; q < 15; ++q) {
      const Eigen::VectorXd c = proj.coefficients(spec.g, x[q]);
      for (std::size_t j = 0; j < M; ++j) sampled[j].at_panels[i][q] = c(static_cast<Eigen::Index>(j));
    }
  }

  const RadialSource env{nullptr, spec.c0, spec.k1, spec.k2};
  std::vector<RadialModeSolution> modes;
  for (std::size_t j = 0; j < M; ++j)
    modes.push_back(solve_sampled(spec.n, field.modes[j].k, field.modes[j].m, grid, sampled[j], env,
                                  options.mode));
  return {std::move(field), ExteriorSolution(spec.n, options.L, std::move(modes))};
}

LaplacianCheck laplacian_check(const ExteriorSolution& v, const SourceFn& g, int directions,
                               int stride, int margin, double rel_step, int order) {
  if (stride < 1 || margin < 1) throw InvalidArgument("stride and margin must be positive");
  const auto& grid = v.grid();
  const auto dirs = sphere::spread_directions(v.n(), directions);
  const auto rule = sphere::quadrature_rule(v.n(), v.basis().degree());
  LaplacianCheck out;
  for (std::size_t i = static_cast<std::size_t>(margin);
       i + static_cast<std::size_t>(margin) < grid.size(); i += static_cast<std::size_t>(stride)) {
    const double r = grid[i];
    double gmax = 0.0;
    for (const auto& p : rule.points) gmax = std::max(gmax, std::abs(g(scaled(p, r))));
    for (const auto& d : dirs) gmax = std::max(gmax, std::abs(g(scaled(d, r))));
    if (gmax == 0.0) continue;
    const double h = rel_step * r;
    for (const auto& d : dirs) {
      const Point x = scaled(d, r);
      const double err = std::abs(v.fd_laplacian(x, h, order) - g(x)) / gmax;
      ++out.points;
      if (err > out.max_relative_error) {
        out.max_relative_error = err;
        out.worst_radius = r;
      }
    }
  }
  return out;
}

int log_exponent(int n, double k1, double k2) {
  if (n < 2) throw InvalidArgument("dimension must be >= 2");
  if (!(k1 > 0.0) || !(k2 >= 0.0)) throw InvalidArgument("need k1 > 0 and k2 >= 0");
  const int base = static_cast<int>(std::lround(k2));
  if (std::abs(k2 - base) > 1e-12) throw InvalidArgument("log power k2 must be an integer");
  if (n == 2) {
    if (!is_natural(k1)) return base;
    return std::lround(k1) == 2 ? base + 2 : base + 1;
  }
  const bool near_one_two = std::abs(k1 - 1.0) < 1e-12 || std::abs(k1 - 2.0) < 1e-12;
  return (is_natural(k1 - n) || near_one_two) ? base + 1 : base;
}

std::vector<DecaySample> dyadic_sup_samples(const ExteriorSolution& v, int directions) {
  const auto dirs = sphere::spread_directions(v.n(), directions);
  std::vector<DecaySample> out;
  for (int e = 0; std::ldexp(1.0, e) <= v.r_max(); ++e) {
    const double r = std::ldexp(1.0, e);
    if (r <= kE || r < v.r_min()) continue;
    double sup = 0.0;
    for (const auto& d : dirs) sup = std::max(sup, std::abs(v.value(scaled(d, r))));
    out.push_back({r, sup});
  }
  return out;
}

namespace {

DecayCertificate certify_scaled(const std::vector<DecaySample>& samples, double exponent,
                                int k_log) {
  DecayCertificate c;
  c.k_log = k_log;
  for (const auto& s : samples) {
    if (s.r <= kE) continue;
    c.radii.push_back(s.r);
    c.scaled.push_back(s.sup_abs * std::pow(s.r, -exponent) * std::pow(std::log(s.r), -k_log));
  }
  if (c.radii.size() < 2) throw InvalidArgument("decay certification needs >= 3 octaves above e");
  c.octaves = static_cast<int>(std::floor(std::log2(c.radii.back() / c.radii.front()) + 1e-9));
  if (c.octaves < 3) throw InvalidArgument("decay certification needs >= 3 octaves above e");
  c.measured_C = *std::max_element(c.scaled.begin(), c.scaled.end());
  // Compare the top sample with the one an octave below it.
  const double top = c.radii.back();
  std::size_t below = 0;
  for (std::size_t i = 0; i + 1 < c.radii.size(); ++i)
    if (std::abs(std::log2(top / c.radii[i]) - 1.0) < std::abs(std::log2(top / c.radii[below]) - 1.0))
      below = i;
  const double q_top = c.scaled.back(), q_below = c.scaled[below];
  c.top_octave_increase = q_below > 0.0 ? (q_top - q_below) / q_below : 0.0;
  // A quarter of the growth one extra power of ln r would show over that octave.
  c.allowed_increase = 0.25 * (std::log(top) / std::log(c.radii[below]) - 1.0);
  c.passed = std::isfinite(c.measured_C) && c.top_octave_increase <= c.allowed_increase;
  return c;
}

}  // namespace

DecayCertificate certify_decay(const std::vector<DecaySample>& samples, int n, double k1, double k2,
                               int k_log_override) {
  const int k_log = k_log_override >= 0 ? k_log_override : log_exponent(n, k1, k2);
  return certify_scaled(samples, 2.0 - k1, k_log);
}

std::vector<DecayCertificate> certify_derivative_decay(const ExteriorSolution& v, int order,
                                                       double k1, double k2, int directions) {
  if (order < 1 || order > 2) throw InvalidArgument("derivative order must be 1 or 2");
  const int k_log = log_exponent(v.n(), k1, k2);
  const auto dirs = sphere::spread_directions(v.n(), directions);
  constexpr double rel_step = 1e-3;
  std::vector<DecayCertificate> out;
  for (int j = 1; j <= order; ++j) {
    std::vector<DecaySample> samples;
    for (int e = 0; std::ldexp(1.0, e) * (1.0 + 3.0 * rel_step) <= v.r_max(); ++e) {
      const double r = std::ldexp(1.0, e);
      if (r <= kE || r * (1.0 - 3.0 * rel_step) < v.r_min()) continue;
      double sup = 0.0;
      for (const auto& d : dirs) {
        const Point x = scaled(d, r);
        const double m = j == 1 ? v.fd_gradient(x, rel_step * r).norm()
                                : v.fd_hessian(x, rel_step * r).norm();
        sup = std::max(sup, m);
      }
      samples.push_back({r, sup});
    }
    out.push_back(certify_scaled(samples, 2.0 - k1 - j, k_log));
  }
  return out;
}

void write_modes_csv(std::ostream& out, const ExteriorSolution& v) {
  CsvWriter csv(out, {"k", "m", "r", "b", "a", "da"});
  for (const auto& md : v.modes())
    for (std::size_t i = 0; i < md.grid.size(); ++i)
      csv.row({std::to_string(md.k), std::to_string(md.m)},
              {md.grid[i], md.b[i], md.a[i], md.da[i]});
}

}  // namespace malab::poisson
