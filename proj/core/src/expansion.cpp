#include "malab/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "malab/errors.hpp"

namespace malab::radial {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxConstantTerms = 20000;

// 2 - zeta k - n (j - k)
Rational exponent(const RadialProfile& p, int j, int k) {
  return Rational(2) - p.zeta * Rational(k) - Rational(static_cast<std::int64_t>(p.n) * (j - k));
}

void check_resonance(const RadialProfile& p, int j, int k) {
  const Rational exact = exponent(p, j, k);
  if (exact == Rational(0)) return;
  const double approx = 2.0 - p.zeta_value() * k - static_cast<double>(p.n) * (j - k);
  if (std::abs(approx) < kResonanceTol) {
    throw DegenerateParameter("exponent 2 - zeta*k - n*(j-k) = " + exact.to_string() +
                              " is within the resonance tolerance at j=" + std::to_string(j) +
                              ", k=" + std::to_string(k));
  }
}

// alpha (alpha-1) ... (alpha-j+1) / j!
double general_binomial(double alpha, int j) {
  double b = 1.0;
  for (int i = 0; i < j; ++i) b *= (alpha - i) / (i + 1);
  return b;
}

double log_choose(int j, int k) {
  return std::lgamma(j + 1.0) - std::lgamma(k + 1.0) - std::lgamma(j - k + 1.0);
}

double sign_pow(double base_sign, int e) { return (e % 2 == 0) ? 1.0 : base_sign; }

bool satisfies_anchor(const RadialProfile& p, double tail, double R) {
  const int n = p.n;
  if (p.log_squared_regime()) {
    return 2.0 * std::log(R) / (R * R) + 2.0 * std::abs(tail) / (R * R) < 1.0;
  }
  const double zeta = p.zeta_value();
  return n / (n - zeta) * std::pow(R, -zeta) + n * std::abs(tail) * std::pow(R, -n) < 1.0;
}

// Tracks a running sum over j-blocks and decides when the tail is negligible.
class BlockSum {
 public:
  BlockSum(double tol, int min_blocks) : tol_(tol), min_blocks_(min_blocks) {}

  // Returns true when summation may stop.
  bool add(double block) {
    sum_ += block;
    ++blocks_;
    if (std::abs(block) <= tol_ * std::max(std::abs(sum_), std::numeric_limits<double>::min()))
      ++quiet_;
    else
      quiet_ = 0;
    return blocks_ >= min_blocks_ && quiet_ >= 3;
  }
  double sum() const { return sum_; }

 private:
  double tol_;
  int min_blocks_;
  double sum_ = 0.0;
  int blocks_ = 0;
  int quiet_ = 0;
};

// sum_{j>=1} sum_{k, nonresonant} c_jk R^{p_jk} / p_jk, all in log form.
double power_series_anchor_sum(const RadialProfile& p, double C0, double R, double tol) {
  const int n = p.n;
  const double zeta = p.zeta_value();
  const double log_a = std::log(n / (n - zeta)) - zeta * std::log(R);
  const double b = n * C0 * std::pow(R, -n);
  const double log_b = b != 0.0 ? std::log(std::abs(b)) : 0.0;
  const double sign_b = b < 0.0 ? -1.0 : 1.0;
  const double alpha = 1.0 / n;
  const int min_blocks = static_cast<int>(std::ceil(2.0 / zeta)) + 2;

  BlockSum total(tol, min_blocks);
  double log_binom = 0.0, sign_binom = 1.0;
  for (int j = 1; j <= kMaxConstantTerms; ++j) {
    const double factor = (alpha - (j - 1)) / j;
    log_binom += std::log(std::abs(factor));
    if (factor < 0.0) sign_binom = -sign_binom;
    double block = 0.0;
    for (int k = (b == 0.0 ? j : 0); k <= j; ++k) {
      check_resonance(p, j, k);
      const Rational e = exponent(p, j, k);
      if (e == Rational(0)) continue;
      const double pe = e.to_double();
      const double log_mag = log_binom + log_choose(j, k) + k * log_a + (j - k) * log_b +
                             2.0 * std::log(R) - std::log(std::abs(pe));
      const double sign = sign_binom * sign_pow(sign_b, j - k) * (pe < 0.0 ? -1.0 : 1.0);
      block += sign * std::exp(log_mag);
    }
    if (total.add(block)) return total.sum();
  }
  throw NumericalFailure("anchor series for C2 did not converge");
}

// sum_{j>=2} sum_k sum_l coef_jkl R^{2-2j} (ln R)^{k-l} with the positive-sign
// convention of C4.
double log_squared_anchor_sum(double C3, double R, double tol) {
  const double lnR = std::log(R);
  const double log_lnR = std::log(lnR);
  const double log_c3 = C3 != 0.0 ? std::log(std::abs(C3)) : 0.0;
  const double sign_c3 = C3 < 0.0 ? -1.0 : 1.0;
  BlockSum total(tol, 4);
  double log_binom = std::log(0.5), sign_binom = 1.0;  // binom(1/2, 1)
  for (int j = 2; j <= kMaxConstantTerms; ++j) {
    const double factor = (0.5 - (j - 1)) / j;
    log_binom += std::log(std::abs(factor));
    if (factor < 0.0) sign_binom = -sign_binom;
    double block = 0.0;
    for (int k = (C3 == 0.0 ? j : 0); k <= j; ++k) {
      for (int l = 0; l <= k; ++l) {
        const double log_mag = log_binom + std::lgamma(j + 1.0) - std::lgamma(j - k + 1.0) -
                               std::lgamma(k - l + 1.0) + (j - l - 1) * std::log(2.0) +
                               (j - k) * log_c3 - (l + 1) * std::log(j - 1.0) +
                               (2.0 - 2.0 * j) * lnR + (k - l) * log_lnR;
        block += sign_binom * sign_pow(sign_c3, j - k) * std::exp(log_mag);
      }
    }
    if (total.add(block)) return total.sum();
  }
  throw NumericalFailure("anchor series for C4 did not converge");
}

// Positive-sign coefficient of r^{2-2j} (ln r)^{k-l} in the log-squared sum.
double log_squared_coefficient(double C3, int j, int k, int l) {
  return general_binomial(0.5, j) * std::exp(std::lgamma(j + 1.0) - std::lgamma(j - k + 1.0) -
                                             std::lgamma(k - l + 1.0)) *
         std::pow(2.0, j - l - 1) * std::pow(C3, j - k) / std::pow(j - 1.0, l + 1);
}

double eval_term(const ExpansionTerm& t, double r) {
  double v = t.coeff;
  if (!(t.order.r_power == Rational(0))) v *= std::pow(r, t.order.r_power_value());
  if (t.order.ln_power != 0) v *= std::pow(std::log(r), t.order.ln_power);
  return v;
}

bool order_greater(const Order& a, const Order& b) {
  if (a.r_power != b.r_power) return a.r_power > b.r_power;
  return a.ln_power > b.ln_power;
}

void validate_truncation(int J) {
  if (J < 1 || J > kMaxTruncationOrder)
    throw InvalidArgument("truncation order J must lie in [1, " +
                          std::to_string(kMaxTruncationOrder) + "]");
}

}  // namespace

ExpansionConstants ExpansionConstants::trivial() {
  ExpansionConstants c;
  c.regime = ExpansionRegime::power_series;
  c.C0 = c.C1 = c.C2 = 0.0;
  c.C3 = c.C4 = kNaN;
  c.R = 2.0;
  c.C_R = 2.0;
  return c;
}

std::vector<double> anchor_radius_ladder() {
  std::vector<double> ladder{2.5, 3.0};
  for (int e = 2; e <= 16; ++e) ladder.push_back(std::ldexp(1.0, e));
  return ladder;
}

ExpansionConstants compute_constants(const RadialProfile& profile, double series_tol) {
  return compute_constants(RadialSolution(profile), series_tol);
}

ExpansionConstants compute_constants(const RadialSolution& solution, double series_tol) {
  const RadialProfile& p = solution.profile();
  if (p.force_constant)
    throw InvalidArgument("expansion constants are undefined for a constant source");
  if (!(series_tol > 0.0)) throw InvalidArgument("series_tol must be positive");

  const double tail = solution.tail_constant();
  ExpansionConstants c;
  c.R = 0.0;
  for (double R : anchor_radius_ladder()) {
    if (satisfies_anchor(p, tail, R)) {
      c.R = R;
      break;
    }
  }
  if (c.R == 0.0)
    throw NumericalFailure("no anchor radius R <= 2^16 satisfies the smallness condition");

  const double dev_R = solution.deviation(c.R);
  c.C_R = 0.5 * c.R * c.R + dev_R;
  const double lnR = std::log(c.R);

  if (p.log_squared_regime()) {
    c.regime = ExpansionRegime::log_squared;
    c.C0 = c.C1 = c.C2 = kNaN;
    c.C3 = tail;
    c.C4 = dev_R - 0.5 * lnR * lnR - c.C3 * lnR + log_squared_anchor_sum(c.C3, c.R, series_tol);
    return c;
  }

  c.regime = ExpansionRegime::power_series;
  c.C3 = c.C4 = kNaN;
  c.C0 = tail;
  const int n = p.n;
  const double zeta = p.zeta_value();
  // Resonant pairs have zeta*j <= 2, so j never exceeds 2/zeta + 1.
  const int j_res = static_cast<int>(std::floor(2.0 / zeta)) + 1;
  c.C1 = 0.0;
  for (int j = 1; j <= j_res; ++j) {
    for (int k = 0; k <= j; ++k) {
      if (exponent(p, j, k) != Rational(0)) continue;
      c.C1 += general_binomial(1.0 / n, j) * std::exp(log_choose(j, k)) *
              std::pow(n / (n - zeta), k) * std::pow(n * c.C0, j - k);
    }
  }
  c.C2 = dev_R - c.C1 * lnR - power_series_anchor_sum(p, c.C0, c.R, series_tol);
  return c;
}

std::optional<Order> first_omitted_order(const RadialProfile& p, int J) {
  validate_truncation(J);
  if (p.force_constant) return std::nullopt;
  if (p.log_squared_regime()) return Order{Rational(2 - 2 * (J + 1)), J + 1};
  std::optional<Order> best;
  for (int j = J + 1; j <= J + 3; ++j) {
    for (int k = 0; k <= j; ++k) {
      const Rational e = exponent(p, j, k);
      if (e == Rational(0)) continue;
      if (!best || e > best->r_power) best = Order{e, 0};
    }
  }
  return best;
}

ExpansionSeries expansion_series(const RadialProfile& p, const ExpansionConstants& c, int J) {
  validate_truncation(J);
  ExpansionSeries s;
  s.constants = c;
  s.truncation_order = J;
  s.terms.push_back({0.5, Order{Rational(2), 0}});
  if (p.force_constant) return s;

  if (p.log_squared_regime()) {
    if (c.regime != ExpansionRegime::log_squared)
      throw InvalidArgument("constants were computed for a different regime");
    s.terms.push_back({0.5, Order{Rational(0), 2}});
    s.terms.push_back({c.C3, Order{Rational(0), 1}});
    s.terms.push_back({c.C4, Order{Rational(0), 0}});
    for (int j = 2; j <= J; ++j)
      for (int k = 0; k <= j; ++k)
        for (int l = 0; l <= k; ++l)
          s.terms.push_back(
              {-log_squared_coefficient(c.C3, j, k, l), Order{Rational(2 - 2 * j), k - l}});
  } else {
    if (c.regime != ExpansionRegime::power_series)
      throw InvalidArgument("constants were computed for a different regime");
    const int n = p.n;
    const double zeta = p.zeta_value();
    s.terms.push_back({c.C1, Order{Rational(0), 1}});
    s.terms.push_back({c.C2, Order{Rational(0), 0}});
    for (int j = 1; j <= J + 3; ++j)
      for (int k = 0; k <= j; ++k) check_resonance(p, j, k);
    for (int j = 1; j <= J; ++j) {
      for (int k = 0; k <= j; ++k) {
        const Rational e = exponent(p, j, k);
        if (e == Rational(0)) continue;
        const double coeff = general_binomial(1.0 / n, j) * std::exp(log_choose(j, k)) *
                             std::pow(n / (n - zeta), k) * std::pow(n * c.C0, j - k) /
                             e.to_double();
        s.terms.push_back({coeff, Order{e, 0}});
      }
    }
  }

  // Merge equal orders, then sort.
  std::vector<ExpansionTerm> merged;
  for (const auto& t : s.terms) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const ExpansionTerm& m) { return m.order == t.order; });
    if (it == merged.end())
      merged.push_back(t);
    else
      it->coeff += t.coeff;
  }
  std::stable_sort(merged.begin(), merged.end(), [](const ExpansionTerm& a, const ExpansionTerm& b) {
    return order_greater(a.order, b.order);
  });
  s.terms = std::move(merged);
  s.first_omitted = first_omitted_order(p, J);
  return s;
}

double ExpansionSeries::value(double r) const {
  double v = 0.0;
  for (const auto& t : terms) v += eval_term(t, r);
  return v;
}

double ExpansionSeries::deviation(double r) const {
  double v = 0.0;
  for (const auto& t : terms) {
    if (t.order == Order{Rational(2), 0}) {
      v += (t.coeff - 0.5) * r * r;
      continue;
    }
    v += eval_term(t, r);
  }
  return v;
}

ExpansionValue expansion_eval(const RadialProfile& profile, const ExpansionConstants& constants,
                              double r, int J) {
  if (!(r > constants.R))
    throw InvalidArgument("expansion_eval requires r > R = " + std::to_string(constants.R));
  const ExpansionSeries s = expansion_series(profile, constants, J);
  return {s.value(r), s.first_omitted};
}

std::vector<ResidualSample> expansion_residual(const RadialSolution& solution,
                                               const ExpansionConstants& constants,
                                               const std::vector<double>& radii, int J) {
  const ExpansionSeries s = expansion_series(solution.profile(), constants, J);
  std::vector<ResidualSample> out;
  out.reserve(radii.size());
  for (double r : radii) {
    if (!(r > constants.R))
      throw InvalidArgument("expansion_residual requires every radius > R = " +
                            std::to_string(constants.R));
    out.push_back({r, solution.deviation(r) - s.deviation(r)});
  }
  return out;
}

std::vector<ResidualSample> expansion_residual(const RadialProfile& profile,
                                               const ExpansionConstants& constants,
                                               const std::vector<double>& radii, int J) {
  return expansion_residual(RadialSolution(profile), constants, radii, J);
}

}  // namespace malab::radial
