#include "malab/mve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "malab/errors.hpp"

namespace malab::geometry {

EllipsoidFit mve_ellipsoid(const std::vector<Eigen::VectorXd>& points, double mve_eps,
                           int max_iterations) {
  if (points.empty()) throw InvalidArgument("mve_ellipsoid needs points");
  if (!(mve_eps > 0.0)) throw InvalidArgument("mve_eps must be positive");
  const auto n = points.front().size();
  const auto m = static_cast<Eigen::Index>(points.size());
  if (m < n + 1)
    throw InvalidArgument("mve_ellipsoid needs at least n + 1 = " + std::to_string(n + 1) +
                          " points");

  for (const auto& p : points)
    if (p.size() != n) throw InvalidArgument("mve_ellipsoid points have mixed dimensions");

  // The iteration is affine equivariant, so work on centred points of unit
  // spread; far-out level sets would otherwise make the lifted Gram matrix
  // hopelessly ill-conditioned.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(m);
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, (p - mean).norm());
  if (!(scale > 0.0)) throw InvalidArgument("mve_ellipsoid input is affinely dependent");

  // Lifted points q_i = (p_i, 1) as columns.
  Eigen::MatrixXd Q(n + 1, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Q.col(i).head(n) = (points[static_cast<std::size_t>(i)] - mean) / scale;
    Q(n, i) = 1.0;
  }
  {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Q * Q.transpose());
    lu.setThreshold(1e-12);
    if (lu.rank() < n + 1) throw InvalidArgument("mve_ellipsoid input is affinely dependent");
  }

  const double d = static_cast<double>(n + 1);
  Eigen::VectorXd u = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  EllipsoidFit fit;
  Eigen::VectorXd M(m);
  for (int it = 0;; ++it) {
    const Eigen::MatrixXd X = Q * u.asDiagonal() * Q.transpose();
    const Eigen::LLT<Eigen::MatrixXd> llt(X);
    if (llt.info() != Eigen::Success)
      throw NumericalFailure("mve_ellipsoid lost positive definiteness");
    const Eigen::MatrixXd W = llt.matrixL().solve(Q);
    M = W.colwise().squaredNorm().transpose();

    Eigen::Index j = 0;
    M.maxCoeff(&j);
    Eigen::Index kappa = -1;
    for (Eigen::Index i = 0; i < m; ++i)
      if (u(i) > 0.0 && (kappa < 0 || M(i) < M(kappa))) kappa = i;
    const double eps_plus = M(j) / d - 1.0;
    const double eps_minus = 1.0 - M(kappa) / d;
    fit.gap = std::max(eps_plus, eps_minus);
    fit.iterations = it;
    if (fit.gap <= mve_eps) break;
    if (it >= max_iterations)
      throw NumericalFailure("mve_ellipsoid did not reach gap " + std::to_string(mve_eps) +
                             " (at " + std::to_string(fit.gap) + ")");
    if (eps_plus >= eps_minus) {
      const double beta = (M(j) - d) / (d * (M(j) - 1.0));
      u *= (1.0 - beta);
      u(j) += beta;
    } else {
      double beta = (d - M(kappa)) / (d * (M(kappa) - 1.0));
      beta = std::min(beta, u(kappa) / (1.0 - u(kappa)));
      u *= (1.0 + beta);
      u(kappa) = std::max(0.0, u(kappa) - beta);
    }
  }

  const Eigen::MatrixXd P = Q.topRows(n);
  fit.center = P * u;
  const Eigen::MatrixXd cov = P * u.asDiagonal() * P.transpose() - fit.center * fit.center.transpose();
  fit.shape = cov.inverse() / (static_cast<double>(n) * scale * scale);
  fit.shape = 0.5 * (fit.shape + fit.shape.transpose());
  fit.center = mean + scale * fit.center;
  const double worst = max_level(fit, points);
  if (worst > 1.0) fit.shape /= worst;
  return fit;
}

double max_level(const EllipsoidFit& e, const std::vector<Eigen::VectorXd>& points) {
  double worst = 0.0;
  for (const auto& p : points) {
    const Eigen::VectorXd r = p - e.center;
    worst = std::max(worst, r.dot(e.shape * r));
  }
  return worst;
}

}  // namespace malab::geometry
