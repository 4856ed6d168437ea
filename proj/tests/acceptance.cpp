// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "malab/errors.hpp"
#include "malab/expansion.hpp"
#include "malab/exterior_poisson.hpp"
#include "malab/quad_extract.hpp"
#include "malab/rate_fit.hpp"
#include "malab/source_catalog.hpp"

using namespace malab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double pow2(double e) { return std::exp2(e); }

radial::RadialProfile profile(int n, Rational zeta, double quad_tol = 1e-10) {
  radial::RadialProfile p;
  p.n = n;
  p.zeta = zeta;
  p.quad_tol = quad_tol;
  return p;
}

std::vector<rates::Sample> deviation_samples(const radial::RadialSolution& s,
                                             const std::vector<double>& radii,
                                             const std::function<double(double)>& minus = {}) {
  std::vector<rates::Sample> out;
  for (double r : radii) out.push_back({r, s.deviation(r) - (minus ? minus(r) : 0.0)});
  return out;
}

Outcome radial_identity() {
  double worst = 0.0;
  for (int n : {2, 3}) {
    radial::RadialProfile p;
    p.n = n;
    p.force_constant = true;
    const radial::RadialSolution s(p);
    for (int e = 0; e <= 16; ++e) {
      const double r = pow2(e);
      worst = std::max(worst, std::abs(s.u(r) - 0.5 * r * r) / (r * r));
    }
  }
  std::ostringstream d;
  d << "max |u - r^2/2|/r^2 = " << worst << " (n = 2, 3)";
  return {worst <= 1e-8, d.str()};
}

Outcome leading_coefficient() {
  const auto p = profile(3, {1, 2});
  const radial::RadialSolution s(p);
  const auto k = radial::compute_constants(s);
  const auto samples = deviation_samples(s, rates::dyadic_radii(pow2(8), pow2(16), 4), [&](double r) {
    return k.C1 * std::log(r) + k.C2;
  });
  const double c = rates::fit_rate_fixed(samples, 1.5, 0).coeff;
  const double want = 1.0 / (1.5 * 2.5);
  std::ostringstream d;
  d << "coeff " << c << " vs " << want << " (rel " << std::abs(c / want - 1) << ")";
  return {std::abs(c / want - 1.0) <= 0.02, d.str()};
}

Outcome log_law() {
  // The constant C2 biases the ln r coefficient by about C2 / ln r, so the
  // window sits where ln r is large.
  const radial::RadialSolution s(profile(3, {2}));
  const double c =
      rates::fit_rate_fixed(deviation_samples(s, rates::dyadic_radii(pow2(64), pow2(160), 1)), 0.0, 1)
          .coeff;
  std::ostringstream d;
  d << "coeff " << c << " vs C1 = 1 on [2^64, 2^160]";
  return {std::abs(c - 1.0) <= 0.02, d.str()};
}

Outcome log_squared_law() {
  const radial::RadialSolution s(profile(2, {2}));
  const double c =
      rates::fit_rate_fixed(deviation_samples(s, rates::dyadic_radii(pow2(24), pow2(64), 1)), 0.0, 2)
          .coeff;
  std::ostringstream d;
  d << "coeff " << c << " vs 0.5 on [2^24, 2^64]";
  return {std::abs(c / 0.5 - 1.0) <= 0.05, d.str()};
}

Outcome residual_orders() {
  struct Case {
    int n;
    Rational zeta;
    int lo, hi;
  };
  // Windows: past the anchor radius and the second omitted order, before
  // roundoff in u - r^2/2 reaches the residual.
  const Case cases[] = {{2, {1, 4}, 12, 20}, {2, {1, 2}, 8, 16}, {2, {1}, 8, 16},
                        {2, {3, 2}, 10, 15}, {2, {2}, 4, 9},     {3, {1, 4}, 12, 20},
                        {3, {1, 2}, 8, 16},  {3, {1}, 8, 16},    {3, {3, 2}, 5, 10},
                        {3, {2}, 6, 10}};
  bool ok = true;
  std::ostringstream d;
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto p = profile(c.n, c.zeta, 1e-13);
    const radial::RadialSolution s(p);
    const auto k = radial::compute_constants(s, 1e-14);
    const auto fo = *radial::first_omitted_order(p, 2);
    const auto res = radial::expansion_residual(s, k, rates::dyadic_radii(pow2(c.lo), pow2(c.hi), 4), 2);
    std::vector<rates::Sample> samples;
    for (const auto& r : res) samples.push_back({r.r, r.residual});
    rates::FitOptions fopt;
    fopt.max_log_power = std::max(2, fo.ln_power);
    const auto f = rates::fit_rate(samples, fopt);
    const double err = std::abs(f.gamma - fo.r_power_value());
    worst = std::max(worst, err);
    if (err > 0.05 || f.p != fo.ln_power) {
      ok = false;
      d << " [n=" << c.n << " zeta=" << c.zeta.to_string() << ": (" << f.gamma << ", " << f.p
        << ") vs (" << fo.r_power.to_string() << ", " << fo.ln_power << ")]";
    }
  }
  std::ostringstream head;
  head << "10 cases, worst |gamma error| " << worst << d.str();
  return {ok, head.str()};
}

Outcome exterior_poisson() {
  bool ok = true;
  double worst_lap = 0.0;
  std::ostringstream d;
  std::vector<double> k1s;
  for (const auto& name : poisson::catalog_names()) {
    const auto spec = poisson::catalog_source(name);
    poisson::SolveOptions o;
    o.r_max = pow2(40);
    const auto res = poisson::solve_exterior(spec, o);
    const auto lap = poisson::laplacian_check(res.solution, spec.g);
    const auto cert = poisson::certify_decay(poisson::dyadic_sup_samples(res.solution), spec.n,
                                             spec.k1, spec.k2);
    worst_lap = std::max(worst_lap, lap.max_relative_error);
    const bool good = lap.max_relative_error <= 1e-6 && cert.passed &&
                      cert.k_log == poisson::log_exponent(spec.n, spec.k1, spec.k2);
    if (!good) {
      ok = false;
      d << " [" << name << ": lap " << lap.max_relative_error << " decay "
        << (cert.passed ? "ok" : "fail") << "]";
    }
    if (name == "radial_inv_r2") {
      d << " radial_inv_r2 k_log=" << cert.k_log;
      ok = ok && cert.k_log == 2;
    }
  }
  std::ostringstream head;
  head << poisson::catalog_names().size() << " sources, worst Laplacian error " << worst_lap << ";"
       << d.str();
  return {ok, head.str()};
}

extract::OracleSpec oracle(int n, Rational zeta) {
  extract::OracleSpec o;
  o.profile.n = n;
  o.profile.zeta = zeta;
  return o;
}

extract::ExtractOptions ladder(Rational zeta) {
  extract::ExtractOptions e;
  e.K = extract::default_ladder_depth(zeta);
  return e;
}

Outcome quadratic_extraction() {
  auto o = oracle(2, {3, 2});
  o.T = Eigen::MatrixXd(2, 2);
  o.T << 1.0, 0.5, 0.0, 1.0;
  const auto r = extract::extract_A(extract::radial_oracle(o), ladder(o.profile.zeta));
  const double err = (r.A - o.T.transpose() * o.T).norm();
  const double det_post = std::abs(r.A.determinant() - 1.0);
  const double det_pre = std::abs(r.det_before - 1.0);
  std::ostringstream d;
  d << "|A - T^T T|_F = " << err << ", |det A - 1| = " << det_post << ", before normalization "
    << det_pre << ", Cauchy drift " << r.cauchy_drift;
  // "Exactly 1" after normalization means up to a few units of roundoff.
  return {err <= 1e-2 && det_post <= 8 * 2.2e-16 && det_pre <= 1e-3 && r.cauchy_drift <= 1e-3,
          d.str()};
}

Outcome linear_term() {
  const auto centered = extract::radial_oracle(oracle(3, {3, 2}));
  const auto Ac = extract::extract_A(centered, ladder(Rational(3, 2))).A;
  const auto b0 = extract::extract_b(centered, Ac, {1e3, 1e4}, 1.5);

  auto t = oracle(3, {3, 2});
  t.x0 = Eigen::Vector3d(3.0, -2.0, 1.0);
  const auto translated = extract::radial_oracle(t);
  const auto At = extract::extract_A(translated, ladder(Rational(3, 2))).A;
  const auto bt = extract::extract_b(translated, At, {1e3, 1e4}, 1.5);
  const double et = (bt.b + At * t.x0).norm();

  const auto slow = extract::radial_oracle(oracle(3, {1, 2}));
  const auto Aslow = extract::extract_A(slow, ladder(Rational(1, 2))).A;
  const auto bs = extract::extract_b(slow, Aslow, {1e3, 1e4}, 0.5);

  std::ostringstream d;
  d << "|b| centred " << b0.b.norm() << ", |b + A x0| " << et << ", zeta = 1/2: "
    << (bs.resolvable ? "resolved (unexpected)" : bs.message);
  return {b0.resolvable && b0.b.norm() <= 1e-2 && bt.resolvable && et <= 2e-2 && !bs.resolvable,
          d.str()};
}

Outcome predicted_rates() {
  struct Case {
    int n;
    Rational zeta;
  };
  const Case cases[] = {{2, {1, 2}}, {3, {1, 2}}, {2, {3, 2}}, {3, {3, 2}},
                        {3, {2}},    {2, {2}},    {2, {1}},    {3, {1}}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& c : cases) {
    const auto s = extract::radial_oracle(oracle(c.n, c.zeta));
    const auto a = extract::extract_A(s, ladder(c.zeta));
    const auto w = extract::default_rate_window(c.zeta);
    const auto f = extract::verify_rates(s, a.A, std::nullopt,
                                         rates::dyadic_radii(w.r_min, w.r_max, w.per_octave));
    const auto law = extract::predicted_rate(c.n, c.zeta);
    const bool match = std::abs(f.gamma - law.gamma) <= 0.05 && f.p == law.p;
    d << " (" << c.n << "," << c.zeta.to_string() << "):" << std::round(f.gamma * 1000) / 1000 << "/"
      << f.p;
    if (!law.gated)
      d << "[ungated]";
    else if (!match) {
      ok = false;
      d << "[MISMATCH]";
    }
  }
  return {ok, "fitted gamma/p" + d.str()};
}

Outcome property_suites() {
#ifdef MALAB_UNIT_TESTS
  const std::string cmd = std::string("\"") + MALAB_UNIT_TESTS +
                          "\" --gtest_filter=Property.* --gtest_brief=1 > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return {rc == 0, rc == 0 ? "all property tests green" : "property tests failed"};
#else
  return {false, "unit test binary not available"};
#endif
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "radial oracle identity", 5, radial_identity},
      {2, "leading coefficient, zeta < 2", 30, leading_coefficient},
      {3, "ln r law, zeta = 2 < n", 30, log_law},
      {4, "(ln r)^2 law, zeta = n = 2", 30, log_squared_law},
      {5, "expansion residual orders", 300, residual_orders},
      {6, "exterior Poisson residual and decay", 120, exterior_poisson},
      {7, "quadratic extraction", 120, quadratic_extraction},
      {8, "linear term capture and refusal", 120, linear_term},
      {9, "predicted remainder rates", 300, predicted_rates},
      {10, "property suites", 300, property_suites},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d %s: %s -- %s [%.1fs / %.0fs%s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), secs, c.budget_seconds, in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  return failures;
}
