#include "malab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "malab/errors.hpp"

namespace malab::sphere {
namespace {

void check_dimension(int n) {
  if (n != 2 && n != 3)
    throw InvalidArgument("spherical harmonics are implemented for n = 2, 3 only (got " +
                          std::to_string(n) + ")");
}

}  // namespace

int eigenvalue(int k, int n) {
  if (k < 0 || n < 2) throw InvalidArgument("eigenvalue needs k >= 0 and n >= 2");
  return k * (k + n - 2);
}

int mode_count(int n, int k) {
  check_dimension(n);
  if (k < 0) throw InvalidArgument("degree must be >= 0");
  if (n == 2) return k == 0 ? 1 : 2;
  return 2 * k + 1;
}

double sphere_area(int n) {
  check_dimension(n);
  return n == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

Basis::Basis(int n, int L) : n_(n), L_(L) {
  check_dimension(n);
  if (L < 0) throw InvalidArgument("degree cutoff L must be >= 0");
  for (int k = 0; k <= L; ++k)
    for (int m = 1; m <= mode_count(n, k); ++m) modes_.push_back({k, m});
}

std::size_t Basis::index(int k, int m) const {
  if (k < 0 || k > L_ || m < 1 || m > mode_count(n_, k))
    throw InvalidArgument("mode (" + std::to_string(k) + ", " + std::to_string(m) +
                          ") outside the basis");
  std::size_t idx = 0;
  for (int j = 0; j < k; ++j) idx += static_cast<std::size_t>(mode_count(n_, j));
  return idx + static_cast<std::size_t>(m - 1);
}

Eigen::VectorXd Basis::evaluate(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(modes_.size()));
  if (n_ == 2) {
    const double t = std::atan2(theta(1), theta(0));
    out(0) = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double s = 1.0 / std::sqrt(std::numbers::pi);
    for (int k = 1; k <= L_; ++k) {
      out(2 * k - 1) = s * std::cos(k * t);
      out(2 * k) = s * std::sin(k * t);
    }
    return out;
  }
  const double z = std::clamp(theta(2), -1.0, 1.0);
  const double polar = std::acos(z);
  const double phi = std::atan2(theta(1), theta(0));
  Eigen::Index idx = 0;
  for (int k = 0; k <= L_; ++k) {
    for (int mu = -k; mu <= k; ++mu) {
      const unsigned a = static_cast<unsigned>(std::abs(mu));
      const double y = std::sph_legendre(static_cast<unsigned>(k), a, polar);
      if (mu == 0)
        out(idx++) = y;
      else if (mu > 0)
        out(idx++) = std::numbers::sqrt2 * y * std::cos(mu * phi);
      else
        out(idx++) = std::numbers::sqrt2 * y * std::sin(-mu * phi);
    }
  }
  return out;
}

double Basis::evaluate(std::size_t mode, const Eigen::VectorXd& theta) const {
  return evaluate(theta)(static_cast<Eigen::Index>(mode));
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw InvalidArgument("Gauss-Legendre needs at least one node");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(static_cast<unsigned>(count), x);
      const double pm = count > 0 ? std::legendre(static_cast<unsigned>(count - 1), x) : 0.0;
      dp = count * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = std::legendre(static_cast<unsigned>(count), x);
    const double pm = std::legendre(static_cast<unsigned>(count - 1), x);
    dp = count * (x * p - pm) / (x * x - 1.0);
    nodes[count - 1 - i] = x;
    weights[count - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

Rule quadrature_rule(int n, int L) {
  check_dimension(n);
  if (L < 0) throw InvalidArgument("degree cutoff L must be >= 0");
  Rule rule;
  rule.n = n;
  if (n == 2) {
    const int count = 4 * L + 8;
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * i / count;
      Eigen::VectorXd p(2);
      p << std::cos(t), std::sin(t);
      rule.points.push_back(p);
      rule.weights.push_back(2.0 * std::numbers::pi / count);
    }
    return rule;
  }
  std::vector<double> z, wz;
  gauss_legendre(L + 2, z, wz);
  const int longitudes = 2 * L + 4;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double s = std::sqrt(1.0 - z[i] * z[i]);
    for (int j = 0; j < longitudes; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / longitudes;
      Eigen::VectorXd p(3);
      p << s * std::cos(phi), s * std::sin(phi), z[i];
      rule.points.push_back(p);
      rule.weights.push_back(wz[i] * 2.0 * std::numbers::pi / longitudes);
    }
  }
  return rule;
}

std::vector<Eigen::VectorXd> spread_directions(int n, int count) {
  check_dimension(n);
  if (count < 1) throw InvalidArgument("need at least one direction");
  std::vector<Eigen::VectorXd> out;
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * i / count;
      Eigen::VectorXd p(2);
      p << std::cos(t), std::sin(t);
      out.push_back(p);
    }
    return out;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double s = std::sqrt(1.0 - z * z);
    Eigen::VectorXd p(3);
    p << s * std::cos(golden * i), s * std::sin(golden * i), z;
    out.push_back(p);
  }
  return out;
}

}  // namespace malab::sphere
