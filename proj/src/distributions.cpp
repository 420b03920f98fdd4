#include "gbe/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gbe/sampling.hpp"
#include "gbe/special.hpp"
#include "gbe/trace_algebra.hpp"

namespace gbe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

bool LogDensity::on_support() const noexcept { return value > -kInf; }

double LogDensity::density() const noexcept { return std::exp(value); }

double log_normalization(const EnsembleParams& params) {
  require_joint_exponent(params);
  const double p = params.exponent_p();
  const double beta = params.beta();
  const double n = params.n_dim();
  return log_gamma(p + 1.0) + (p + 1.0) * std::log(2.0 / beta) +
         0.5 * std::log(2.0 * std::numbers::pi * n / beta);
}

double log_q_uv_unnormalized(const EnsembleParams& params, double u, double v) {
  require_joint_exponent(params);
  const double p = params.exponent_p();
  const double weight = -0.5 * params.beta() * (u + v * v / params.n_dim());
  if (u > 0.0) return p * std::log(u) + weight;
  if (u < 0.0 || p > 0.0) return -kInf;
  if (p == 0.0) return weight;
  return kInf;
}

double log_q_t1_t2_unnormalized(const EnsembleParams& params, double t1, double t2) {
  return log_q_uv_unnormalized(params, t2 - t1 * t1 / params.n_dim(), t1);
}

LogDensity log_q_t1_t2(const EnsembleParams& params, double t1, double t2) {
  const double un = log_q_t1_t2_unnormalized(params, t1, t2);
  if (std::isinf(un)) return {un};
  return {un - log_normalization(params)};
}

LogDensity log_q_t1(const EnsembleParams& params, double t1) {
  const double n = params.n_dim();
  const double beta = params.beta();
  return {0.5 * std::log(beta / (2.0 * std::numbers::pi * n)) - beta / (2.0 * n) * t1 * t1};
}

LogDensity log_q_t2(const EnsembleParams& params, double t2) {
  const double shape = params.exponent_p() + 1.5;
  if (!(shape > 0.0)) throw Error(ErrorCode::InvalidExponent, "p + 3/2 must be positive");
  if (!(t2 > 0.0)) throw Error(ErrorCode::NonPositiveT2, "t2 must be positive");
  const double half_beta = 0.5 * params.beta();
  return {shape * std::log(half_beta) - log_gamma(shape) - half_beta * t2 +
          (shape - 1.0) * std::log(t2)};
}

std::pair<double, double> sample_t1_t2_exact(const EnsembleParams& params, RngStream& rng) {
  require_joint_exponent(params);
  const double n = params.n_dim();
  const double beta = params.beta();
  const double v = std::sqrt(n / beta) * rng.normal();
  double u = 0.0;
  // u > 0 almost surely; redraw the measure-zero underflow case.
  do {
    u = (2.0 / beta) * sample_gamma(params.exponent_p() + 1.0, rng);
  } while (!(u > 0.0));
  return {v, u + v * v / n};
}

double mixed_moment(const EnsembleParams& params, int k, int n) {
  if (k < 0 || n < 0) throw Error(ErrorCode::InvalidArgument, "moment orders must be >= 0");
  const double p = params.exponent_p();
  const double a = k + p + 1.5;
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidExponent, "p + k + 3/2 must be positive");
  const double dim = params.n_dim();
  const double scale = 2.0 / params.beta();
  // Gamma(k + 1/2) / sqrt(pi) and Gamma(a + n) / Gamma(a) are finite rising
  // products for integer k and n; multiplying them out avoids the Lanczos
  // round-off. The log-gamma route takes over once the product overflows.
  double m = 1.0;
  for (int j = 0; j < k; ++j) m *= (j + 0.5) * dim * scale;
  for (int j = 0; j < n; ++j) m *= (a + j) * scale;
  if (std::isfinite(m) && m > 0.0) return m;
  const double log_m = k * std::log(dim) - 0.5 * std::log(std::numbers::pi) + (k + n) * std::log(scale) +
                       log_gamma(k + 0.5) + log_gamma(a + n) - log_gamma(a);
  return std::exp(log_m);
}

double raw_moment(const EnsembleParams& params, int m, int n) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "moment orders must be >= 0");
  if (m % 2 != 0) return 0.0;
  return mixed_moment(params, m / 2, n);
}

double mean_t2(const EnsembleParams& params) {
  const double n = params.n_dim();
  const double beta = params.beta();
  return 0.5 * n * n + (2.0 - beta) * n / (2.0 * beta);
}

LogDensity log_trace_jpdf_unnormalized(const EnsembleParams& params, const TraceVector& t) {
  if (t.n_dim() != params.n_dim()) {
    throw Error(ErrorCode::InvalidArgument, "trace vector N differs from ensemble N");
  }
  const DiscriminantValue disc = discriminant(t);
  if (!disc.in_domain()) return {-kInf};
  const double beta = params.beta();
  // A single-eigenvalue trace vector may carry t1 only, and then t2 = t1^2.
  const double t2 = t.size() >= 2 ? t.t(2) : t.t(1) * t.t(1);
  const double weight = -0.5 * beta * t2;
  if (beta == 1.0) return {weight};
  if (disc.classification == DomainClass::Boundary) return {beta > 1.0 ? -kInf : kInf};
  return {(beta - 1.0) * disc.log_abs_G + weight};
}

}  // namespace gbe
