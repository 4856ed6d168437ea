#pragma once

#include <vector>

#include <Eigen/Core>

namespace malab::geometry {

/// Ellipsoid {x : (x - c)^T Q (x - c) <= 1}.
struct EllipsoidFit {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;
  double level = 0.0;     ///< sublevel value the points came from (0 if unknown)
  double gap = 0.0;       ///< final duality gap max(eps+, eps-)
  int iterations = 0;
};

/// Minimum-volume enclosing ellipsoid by Khachiyan's algorithm with
/// Todd-Yildirim away steps, stopped when the duality gap is <= mve_eps.
/// The shape is finally shrunk so every point lies inside. Throws on fewer
/// than n + 1 points or affinely dependent input.
EllipsoidFit mve_ellipsoid(const std::vector<Eigen::VectorXd>& points, double mve_eps = 1e-6,
                           int max_iterations = 200000);

/// max_i (p_i - c)^T Q (p_i - c).
double max_level(const EllipsoidFit& e, const std::vector<Eigen::VectorXd>& points);

}  // namespace malab::geometry
