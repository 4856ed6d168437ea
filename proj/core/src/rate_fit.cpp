#include "malab/rate_fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "malab/errors.hpp"

namespace malab::rates {
namespace {

struct Prepared {
  std::vector<double> r, w;
  int zeros_dropped = 0;
  int octaves = 0;
};

Prepared prepare(const std::vector<Sample>& samples, const FitOptions& opt) {
  Prepared out;
  bool all_zero = !samples.empty();
  for (const auto& s : samples) {
    if (!std::isfinite(s.r) || !std::isfinite(s.w))
      throw InvalidArgument("rate fit sample is not finite");
    if (s.w != 0.0) all_zero = false;
    if (s.r <= std::exp(1.0)) continue;
    if (s.w == 0.0) {
      ++out.zeros_dropped;
      continue;
    }
    out.r.push_back(s.r);
    out.w.push_back(s.w);
  }
  if (all_zero) throw InvalidArgument("rate fit input is identically zero");
  if (static_cast<int>(out.r.size()) < opt.min_samples)
    throw InvalidArgument("rate fit needs at least " + std::to_string(opt.min_samples) +
                          " usable samples above r = e, got " + std::to_string(out.r.size()));
  const auto [lo, hi] = std::minmax_element(out.r.begin(), out.r.end());
  out.octaves = static_cast<int>(std::floor(std::log2(*hi / *lo) + 1e-9));
  if (out.octaves < opt.min_octaves)
    throw InvalidArgument("rate fit samples span " + std::to_string(out.octaves) +
                          " octaves, need " + std::to_string(opt.min_octaves));
  if (opt.sign_mode == SignMode::signed_values) {
    const bool positive = out.w.front() > 0.0;
    for (double w : out.w)
      if ((w > 0.0) != positive)
        throw InvalidArgument("signed rate fit requires samples of one sign");
  }
  return out;
}

struct PowerFit {
  double gamma, log_coeff, rms;
};

PowerFit fit_power(const Prepared& d, int p) {
  const auto m = static_cast<Eigen::Index>(d.r.size());
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double lr = std::log(d.r[i]);
    X(i, 0) = 1.0;
    X(i, 1) = lr;
    y(i) = std::log(std::abs(d.w[i])) - p * std::log(lr);
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  const double rms = std::sqrt((X * beta - y).squaredNorm() / static_cast<double>(m));
  return {beta(1), beta(0), rms};
}

}  // namespace

RateFitResult fit_rate(const std::vector<Sample>& samples, const FitOptions& options) {
  if (options.max_log_power < 0) throw InvalidArgument("max_log_power must be >= 0");
  const Prepared d = prepare(samples, options);
  RateFitResult result;
  result.octaves = d.octaves;
  result.samples_used = static_cast<int>(d.r.size());
  result.zeros_dropped = d.zeros_dropped;

  std::vector<PowerFit> fits;
  for (int p = 0; p <= options.max_log_power; ++p) {
    fits.push_back(fit_power(d, p));
    result.rms_by_power.push_back(fits.back().rms);
  }
  // Walk upward in p; a larger power has to earn its place. Differences at the
  // level of rounding noise never count as an improvement.
  constexpr double kNoiseFloor = 1e-12;
  int chosen = 0;
  for (int p = 1; p <= options.max_log_power; ++p) {
    const double current = fits[chosen].rms;
    if (fits[p].rms < (1.0 - options.parsimony) * current && current - fits[p].rms > kNoiseFloor)
      chosen = p;
  }
  result.p = chosen;
  result.gamma = fits[chosen].gamma;
  result.rms_residual = fits[chosen].rms;
  double sign = 1.0;
  if (options.sign_mode == SignMode::signed_values && d.w.front() < 0.0) sign = -1.0;
  result.coeff = sign * std::exp(fits[chosen].log_coeff);
  return result;
}

FixedFit fit_rate_fixed(const std::vector<Sample>& samples, double gamma0, int p0,
                        const FitOptions& options) {
  if (p0 < 0) throw InvalidArgument("log power must be >= 0");
  FitOptions opt = options;
  opt.sign_mode = SignMode::abs;
  const Prepared d = prepare(samples, opt);
  std::vector<double> phi(d.r.size());
  double phi_max = 0.0;
  for (std::size_t i = 0; i < d.r.size(); ++i) {
    phi[i] = std::pow(d.r[i], gamma0) * std::pow(std::log(d.r[i]), p0);
    phi_max = std::max(phi_max, std::abs(phi[i]));
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.r.size(); ++i) {
    const double q = phi[i] / phi_max;
    num += d.w[i] * q;
    den += q * q;
  }
  FixedFit out;
  out.coeff = num / den / phi_max;
  double ss = 0.0;
  for (std::size_t i = 0; i < d.r.size(); ++i) {
    const double e = std::log(std::abs(d.w[i])) - std::log(std::abs(out.coeff * phi[i]));
    ss += e * e;
  }
  out.rms_residual = std::sqrt(ss / static_cast<double>(d.r.size()));
  return out;
}

std::vector<double> dyadic_radii(double r_min, double r_max, int per_octave) {
  if (!(r_min > 0.0) || !(r_max >= r_min) || per_octave < 1)
    throw InvalidArgument("dyadic_radii needs 0 < r_min <= r_max and per_octave >= 1");
  std::vector<double> out;
  const double span = std::log2(r_max / r_min) * per_octave;
  const int count = static_cast<int>(std::floor(span + 1e-9));
  for (int i = 0; i <= count; ++i)
    out.push_back(r_min * std::exp2(static_cast<double>(i) / per_octave));
  return out;
}

}  // namespace malab::rates
