#pragma once

#include <utility>

#include "gbe/core.hpp"
#include "gbe/rng.hpp"

namespace gbe {

/// Natural-log density value. -inf off the support; never NaN.
struct LogDensity {
  double value = 0.0;

  bool on_support() const noexcept;
  /// exp(value), for callers that want the linear scale.
  double density() const noexcept;
};

/// ln of Gamma(p+1) (2/beta)^{p+1} sqrt(2 pi N / beta), the normalization of
/// the joint (t1, t2) density. Throws InvalidExponent when p <= -1.
double log_normalization(const EnsembleParams& params);

/// Joint density of (t1, t2):
///   (t2 - t1^2/N)^p exp(-(beta/2) t2) / normalization   for t2 > t1^2/N.
/// On the parabola t2 = t1^2/N the value is -inf for p > 0, the finite limit
/// for p = 0 and +inf for -1 < p < 0.
LogDensity log_q_t1_t2(const EnsembleParams& params, double t1, double t2);

/// Unnormalized version of log_q_t1_t2 (the normalization term dropped).
double log_q_t1_t2_unnormalized(const EnsembleParams& params, double t1, double t2);

/// The same unnormalized joint density in u = t2 - t1^2/N, v = t1:
/// p ln u - (beta/2)(u + v^2/N).
double log_q_uv_unnormalized(const EnsembleParams& params, double u, double v);

/// t1 ~ Normal(0, N / beta).
LogDensity log_q_t1(const EnsembleParams& params, double t1);

/// beta t2 / 2 ~ Gamma(p + 3/2); needs t2 > 0 (NonPositiveT2 otherwise).
LogDensity log_q_t2(const EnsembleParams& params, double t2);

/// Exact draw of (t1, t2) through the (u, v) factorization:
/// v ~ Normal(0, N/beta), u ~ Gamma(p + 1, scale 2/beta), t1 = v, t2 = u + v^2/N.
std::pair<double, double> sample_t1_t2_exact(const EnsembleParams& params, RngStream& rng);

/// E[t1^{2k} t2^n] in closed form, evaluated through log-gamma. Odd powers of
/// t1 have zero mean and are not represented here.
double mixed_moment(const EnsembleParams& params, int k, int n);

/// E[t1^m t2^n] for any m: zero for odd m, mixed_moment(m/2, n) otherwise.
double raw_moment(const EnsembleParams& params, int m, int n);

/// N^2/2 + (2 - beta) N / (2 beta).
double mean_t2(const EnsembleParams& params);

/// (beta - 1) ln|G(t)| - (beta/2) t2 on the discriminant domain, -inf off it.
/// The ensemble constant is omitted. On the domain boundary G = 0, giving
/// -inf for beta > 1, +inf for beta < 1 and -t2/2 for beta = 1.
LogDensity log_trace_jpdf_unnormalized(const EnsembleParams& params, const TraceVector& t);

}  // namespace gbe
