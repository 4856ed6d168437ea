#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <boost/math/tools/roots.hpp>
#include <gtest/gtest.h>

#include "malab/errors.hpp"
#include "malab/mve.hpp"
#include "malab/quad_extract.hpp"

using namespace malab;
using namespace malab::extract;

namespace {

ConvexSample quadratic(const Matrix& Q, const Vector& c) {
  ConvexSample s;
  s.n = static_cast<int>(Q.rows());
  s.u = [Q, c](const Vector& x) { return 0.5 * x.dot(Q * x) + c.dot(x); };
  s.gradient = [Q, c](const Vector& x) -> Vector { return Q * x + c; };
  s.f_infinity = Q.determinant();
  return s;
}

OracleSpec oracle(int n, Rational zeta) {
  OracleSpec o;
  o.profile.n = n;
  o.profile.zeta = zeta;
  return o;
}

ExtractOptions ladder_for(Rational zeta) {
  ExtractOptions e;
  e.K = default_ladder_depth(zeta);
  return e;
}

Matrix shear() {
  Matrix T(2, 2);
  T << 1.0, 0.5, 0.0, 1.0;
  return T;
}

std::vector<Vector> ellipse_points(const Matrix& Q, int count) {
  // Boundary of x^T Q x = 1.
  const Eigen::LLT<Matrix> llt(Q);
  const Matrix Linv = llt.matrixU().solve(Matrix::Identity(2, 2));
  std::vector<Vector> pts;
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * std::numbers::pi * i / count;
    pts.push_back(Linv * Vector{{std::cos(t), std::sin(t)}});
  }
  return pts;
}

}  // namespace

TEST(Mve, UnitCircle) {
  const auto fit = geometry::mve_ellipsoid(ellipse_points(Matrix::Identity(2, 2), 64), 1e-12);
  EXPECT_LE(fit.center.norm(), 1e-12);
  EXPECT_LE((fit.shape - Matrix::Identity(2, 2)).norm(), 1e-10);
}

TEST(Mve, AxisAlignedEllipse) {
  const Matrix Q = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  const auto fit = geometry::mve_ellipsoid(ellipse_points(Q, 90), 1e-10);
  EXPECT_LE((fit.shape - Q).norm(), 1e-8);
}

TEST(Mve, FarFromOriginAndLarge) {
  const Matrix Q = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  auto pts = ellipse_points(Q, 90);
  for (auto& p : pts) p = 1e8 * p + Vector{{3e9, -1e9}};
  const auto fit = geometry::mve_ellipsoid(pts, 1e-10);
  EXPECT_LE((1e16 * fit.shape - Q).norm(), 1e-6);
  EXPECT_LE((fit.center - Vector{{3e9, -1e9}}).norm(), 1e-1);
}

TEST(Mve, RandomCloudIsContained) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<Vector> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(Vector{{g(rng), 2.0 * g(rng), 0.5 * g(rng)}});
  const auto fit = geometry::mve_ellipsoid(pts, 1e-8);
  EXPECT_LE(geometry::max_level(fit, pts), 1.0 + 1e-12);
  // Support points sit on the boundary.
  EXPECT_GE(geometry::max_level(fit, pts), 1.0 - 1e-7);
}

TEST(Mve, Degenerate) {
  std::vector<Vector> line;
  for (int i = 0; i < 10; ++i) line.push_back(Vector{{double(i), 2.0 * i}});
  EXPECT_THROW(geometry::mve_ellipsoid(line), InvalidArgument);
  EXPECT_THROW(geometry::mve_ellipsoid({Vector{{0.0, 0.0}}, Vector{{1.0, 0.0}}}), InvalidArgument);
}

TEST(SublevelBoundary, Paraboloid) {
  const auto s = quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  for (const auto& p : sublevel_boundary(s, 2.0)) EXPECT_NEAR(p.norm(), 2.0, 1e-12);
}

TEST(SublevelBoundary, ShearedQuadratic) {
  const Matrix T = shear();
  const Matrix Q = T.transpose() * T;
  const auto s = quadratic(Q, Vector::Zero(2));
  for (const auto& p : sublevel_boundary(s, 3.0)) EXPECT_NEAR(p.dot(Q * p), 6.0, 1e-11);
}

TEST(SublevelBoundary, RadialOracle) {
  const auto s = radial_oracle(oracle(3, {1, 2}));
  std::uintmax_t iters = 100;
  const auto [a, b] = boost::math::tools::toms748_solve(
      [](double r) { return 0.5 * r * r + 0.2667 * std::pow(r, 1.5) - 1e4; }, 1.0, 1e3,
      boost::math::tools::eps_tolerance<double>(50), iters);
  const double root = 0.5 * (a + b);
  for (const auto& p : sublevel_boundary(s, 1e4, 0, Vector::Zero(3)))
    EXPECT_NEAR(p.norm(), root, 0.01 * root);
}

TEST(SublevelBoundary, Validation) {
  auto s = quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  EXPECT_THROW(sublevel_boundary(s, -1.0), InvalidArgument);
  EXPECT_THROW(sublevel_boundary(s, 2.0, 3), InvalidArgument);
  s.domain_radius = 10.0;
  EXPECT_THROW(sublevel_boundary(s, 1e4), InvalidArgument);
}

TEST(Convexity, MidpointCheck) {
  EXPECT_TRUE(check_midpoint_convexity(radial_oracle(oracle(2, {1, 2})), 50.0).passed);
  ConvexSample bad = quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  bad.u = [](const Vector& x) { return std::sin(x(0)) + x(1) * x(1); };
  EXPECT_FALSE(check_midpoint_convexity(bad, 10.0).passed);
}

TEST(ExtractA, ExactQuadratic) {
  const auto r = extract_A(quadratic(Matrix::Identity(3, 3), Vector::Zero(3)), ExtractOptions{});
  EXPECT_LE((r.A - Matrix::Identity(3, 3)).norm(), 1e-10);
  EXPECT_LE(r.cauchy_drift, 1e-10);
}

TEST(ExtractA, ShearedOracle) {
  OracleSpec o = oracle(2, {3, 2});
  o.T = shear();
  const auto r = extract_A(radial_oracle(o), ladder_for(o.profile.zeta));
  EXPECT_LE((r.A - o.T.transpose() * o.T).norm(), 1e-2);
  EXPECT_NEAR(r.A.determinant(), 1.0, 1e-13);
  EXPECT_LE(std::abs(r.det_before - 1.0), 1e-3);
}

TEST(ExtractA, LogCorrectionIsSubquadratic) {
  const auto r = extract_A(radial_oracle(oracle(3, {2})), ladder_for(Rational(2)));
  EXPECT_LE((r.A - Matrix::Identity(3, 3)).norm(), 1e-2);
}

TEST(ExtractA, ReportsCauchyDrift) {
  ExtractOptions e;
  e.K = 2;
  e.cauchy_tol = 1e-6;
  try {
    extract_A(radial_oracle(oracle(2, {1, 2})), e);
    FAIL() << "expected a Cauchy failure";
  } catch (const CertificationFailure& err) {
    EXPECT_NE(std::string(err.what()).find("drift"), std::string::npos);
  }
}

TEST(ExtractA, LadderStepsShrinkAtTheTop) {
  for (int n : {2, 3})
    for (Rational z : {Rational(1, 2), Rational(3, 2), Rational(2)}) {
      const auto r = extract_A(radial_oracle(oracle(n, z)), ladder_for(z));
      const auto& st = r.steps;
      ASSERT_GE(st.size(), 3u);
      EXPECT_LE(st[st.size() - 1], st[st.size() - 2]) << n << " " << z.to_string();
      EXPECT_LE(st[st.size() - 2], st[st.size() - 3]) << n << " " << z.to_string();
    }
}

TEST(ExtractB, ExactLinearTerm) {
  const auto s = quadratic(Matrix::Identity(3, 3), Vector{{3.0, 0.0, 0.0}});
  const auto b = extract_b(s, Matrix::Identity(3, 3), {1e3, 1e4}, 1.5);
  ASSERT_TRUE(b.resolvable);
  EXPECT_LE((b.b - Vector{{3.0, 0.0, 0.0}}).norm(), 1e-9);
}

TEST(ExtractB, CenteredAndTranslatedOracles) {
  const auto s = radial_oracle(oracle(3, {3, 2}));
  const auto a = extract_A(s, ladder_for(Rational(3, 2)));
  const auto b0 = extract_b(s, a.A, {1e3, 1e4}, 1.5);
  EXPECT_LE(b0.b.norm(), 1e-2);

  OracleSpec o = oracle(3, {3, 2});
  o.x0 = Vector{{3.0, -2.0, 1.0}};
  const auto st = radial_oracle(o);
  const auto at = extract_A(st, ladder_for(Rational(3, 2)));
  const auto bt = extract_b(st, at.A, {1e3, 1e4}, 1.5);
  EXPECT_LE((bt.b + at.A * o.x0).norm(), 2e-2);
}

TEST(ExtractB, RefusesSlowDecay) {
  const auto s = radial_oracle(oracle(3, {1, 2}));
  const auto b = extract_b(s, Matrix::Identity(3, 3), {1e3, 1e4}, 0.5);
  EXPECT_FALSE(b.resolvable);
  EXPECT_NE(b.message.find("no linear term"), std::string::npos);
}

TEST(Rates, PredictedLaws) {
  const auto a = predicted_rate(3, {1, 2});
  EXPECT_EQ(a.gamma, 1.5);
  EXPECT_EQ(a.p, 0);
  EXPECT_EQ(predicted_rate(3, {2}).p, 1);
  EXPECT_EQ(predicted_rate(2, {2}).p, 2);
  EXPECT_FALSE(predicted_rate(3, {1}).gated);
  EXPECT_THROW(predicted_rate(3, {5, 2}), InvalidArgument);
}

TEST(Rates, VerifyOnOracles) {
  struct Case {
    int n;
    Rational zeta;
  };
  for (const Case c : {Case{3, {1, 2}}, Case{3, {2}}, Case{2, {2}}}) {
    const auto s = radial_oracle(oracle(c.n, c.zeta));
    const auto a = extract_A(s, ladder_for(c.zeta));
    const auto w = default_rate_window(c.zeta);
    const auto fit = verify_rates(s, a.A, std::nullopt,
                                  rates::dyadic_radii(w.r_min, w.r_max, w.per_octave));
    const auto law = predicted_rate(c.n, c.zeta);
    EXPECT_NEAR(fit.gamma, law.gamma, 0.05) << c.n << " " << c.zeta.to_string();
    EXPECT_EQ(fit.p, law.p) << c.n << " " << c.zeta.to_string();
  }
}

TEST(Oracle, Validation) {
  OracleSpec o = oracle(2, {1, 2});
  o.T = Matrix::Zero(2, 2);
  EXPECT_THROW(radial_oracle(o), InvalidArgument);
  o = oracle(2, {1, 2});
  o.f_infinity = -1.0;
  EXPECT_THROW(radial_oracle(o), InvalidArgument);
}
