#pragma once

#include <vector>

#include <Eigen/Core>

namespace malab::sphere {

/// Eigenvalue k(k + n - 2) of minus the sphere Laplacian on degree-k harmonics.
int eigenvalue(int k, int n);

/// Number of independent degree-k harmonics (n = 2 or 3).
int mode_count(int n, int k);

double sphere_area(int n);

struct Mode {
  int k = 0;
  int m = 1;  ///< 1-based index within degree k
};

/// Real orthonormal harmonic basis of degree <= L. For n = 2 the order is
/// 1/sqrt(2pi), then cos(k t)/sqrt(pi), sin(k t)/sqrt(pi) per k. For n = 3,
/// index m = mu + k + 1 for orders mu = -k..k, with sin for mu < 0.
class Basis {
 public:
  Basis(int n, int L);

  int n() const { return n_; }
  int degree() const { return L_; }
  const std::vector<Mode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  /// Index of mode (k, m) in modes().
  std::size_t index(int k, int m) const;

  /// Values of all basis functions at the unit vector theta.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& theta) const;
  double evaluate(std::size_t mode, const Eigen::VectorXd& theta) const;

 private:
  int n_;
  int L_;
  std::vector<Mode> modes_;
};

/// Tensor/trapezoid rule exact for polynomial degree <= 2L + 3 on the sphere:
/// n = 2 uses 4L + 8 equispaced angles; n = 3 uses L + 2 Gauss-Legendre
/// latitudes times 2L + 4 equispaced longitudes.
struct Rule {
  int n = 2;
  std::vector<Eigen::VectorXd> points;  ///< unit vectors
  std::vector<double> weights;
};

Rule quadrature_rule(int n, int L);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

/// Fixed-spiral point set on S^2 (n = 3) or equispaced angles (n = 2).
std::vector<Eigen::VectorXd> spread_directions(int n, int count);

}  // namespace malab::sphere
