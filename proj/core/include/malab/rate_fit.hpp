#pragma once

#include <vector>

namespace malab::rates {

enum class SignMode { abs, signed_values };

struct Sample {
  double r = 0.0;
  double w = 0.0;
};

/// Fitted law w ~ coeff * r^gamma * (ln r)^p.
struct RateFitResult {
  double gamma = 0.0;
  int p = 0;
  double coeff = 0.0;
  double rms_residual = 0.0;  ///< in log space
  int octaves = 0;
  int samples_used = 0;
  int zeros_dropped = 0;
  std::vector<double> rms_by_power;  ///< rms of the best fit for each candidate p
};

struct FitOptions {
  SignMode sign_mode = SignMode::abs;
  int max_log_power = 2;
  /// A larger p must lower the rms by more than this fraction to be chosen.
  double parsimony = 0.02;
  int min_samples = 12;
  int min_octaves = 3;
};

/// Least squares of log|w| - p log log r = log|coeff| + gamma log r for each
/// p in [0, max_log_power]; samples with r <= e are dropped.
RateFitResult fit_rate(const std::vector<Sample>& samples, const FitOptions& options = {});

struct FixedFit {
  double coeff = 0.0;
  double rms_residual = 0.0;  ///< log space
};

/// Least-squares coefficient with the law r^gamma0 (ln r)^p0 held fixed.
FixedFit fit_rate_fixed(const std::vector<Sample>& samples, double gamma0, int p0,
                        const FitOptions& options = {});

/// r_min * 2^(i / per_octave) for i = 0 .. up to r_max (inclusive when hit).
std::vector<double> dyadic_radii(double r_min, double r_max, int per_octave);

}  // namespace malab::rates
