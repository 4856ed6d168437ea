#pragma once

#include <optional>
#include <vector>

#include "malab/radial_lab.hpp"
#include "malab/rational.hpp"

namespace malab::radial {

/// Which closed form the asymptotic expansion takes.
enum class ExpansionRegime {
  power_series,  ///< zeta < n: r^2/2 + C1 ln r + C2 + double sum
  log_squared,   ///< zeta = n = 2: r^2/2 + (ln r)^2/2 + C3 ln r + C4 - triple sum
};

/// Constants of the expansion at infinity. Entries that do not apply to the
/// regime are NaN (C0..C2 in the log-squared regime, C3/C4 otherwise).
struct ExpansionConstants {
  ExpansionRegime regime = ExpansionRegime::power_series;
  double C0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double C4 = 0.0;
  double C_R = 0.0;  ///< u(R)
  double R = 0.0;    ///< anchor radius, > 2

  /// All-zero constants for constant-source (oracle) profiles, where the
  /// expansion reduces to r^2/2 exactly.
  static ExpansionConstants trivial();
};

/// Growth order r^r_power (ln r)^ln_power.
struct Order {
  Rational r_power;
  int ln_power = 0;

  double r_power_value() const { return r_power.to_double(); }
  friend bool operator==(const Order&, const Order&) = default;
};

struct ExpansionTerm {
  double coeff = 0.0;
  Order order;
};

struct ExpansionSeries {
  std::vector<ExpansionTerm> terms;  ///< decreasing r_power, then decreasing ln_power
  ExpansionConstants constants;
  int truncation_order = 1;
  std::optional<Order> first_omitted;  ///< empty when the series is exact

  double value(double r) const;
  /// value(r) - r^2/2, summed without the quadratic term.
  double deviation(double r) const;
};

struct ExpansionValue {
  double value = 0.0;
  std::optional<Order> first_omitted;
};

struct ResidualSample {
  double r = 0.0;
  double residual = 0.0;  ///< u_radial(r) - expansion(r)
};

inline constexpr int kMaxTruncationOrder = 30;
inline constexpr double kDefaultSeriesTol = 1e-12;
inline constexpr double kResonanceTol = 1e-9;

/// Ladder of admissible anchor radii: 2.5, 3, 4, 8, 16, ..., 2^16.
std::vector<double> anchor_radius_ladder();

/// C0 (or C3), anchor radius R, C_R = u(R), C1, and C2 (or C4) with the
/// infinite sums truncated once a full j-block falls below series_tol
/// relative to the running sum. Throws if no ladder radius satisfies the
/// smallness condition or the profile is in constant mode.
ExpansionConstants compute_constants(const RadialProfile& profile,
                                     double series_tol = kDefaultSeriesTol);
ExpansionConstants compute_constants(const RadialSolution& solution,
                                     double series_tol = kDefaultSeriesTol);

/// Expansion truncated at outer index j <= J (1 <= J <= kMaxTruncationOrder).
/// Throws DegenerateParameter when some exponent 2 - zeta k - n (j - k) is
/// within kResonanceTol of zero without being exactly zero.
ExpansionSeries expansion_series(const RadialProfile& profile, const ExpansionConstants& constants,
                                 int J);

/// Largest (r_power, ln_power) among the terms dropped by truncation at J;
/// empty in constant mode.
std::optional<Order> first_omitted_order(const RadialProfile& profile, int J);

/// Requires r > R.
ExpansionValue expansion_eval(const RadialProfile& profile, const ExpansionConstants& constants,
                              double r, int J);

/// u_radial - expansion at each radius (all radii must exceed R). The
/// difference is formed from u - r^2/2 and the series without its r^2/2
/// term, so it does not lose digits to the quadratic part.
std::vector<ResidualSample> expansion_residual(const RadialSolution& solution,
                                               const ExpansionConstants& constants,
                                               const std::vector<double>& radii, int J);
std::vector<ResidualSample> expansion_residual(const RadialProfile& profile,
                                               const ExpansionConstants& constants,
                                               const std::vector<double>& radii, int J);

}  // namespace malab::radial
