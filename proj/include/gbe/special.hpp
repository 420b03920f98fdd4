#pragma once

namespace gbe {

/// ln|Gamma(x)| via the Lanczos approximation (g = 7, nine coefficients),
/// with reflection for x < 1/2. Poles return +inf.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x) for a > 0. Uses the power series
/// for x < a + 1 and a Lentz continued fraction for the complement otherwise.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// CDF of Normal(0, variance) at x.
double normal_cdf(double x, double variance);

/// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace gbe
