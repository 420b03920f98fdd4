#include "gbe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gbe/special.hpp"

namespace gbe {

double ks_statistic(std::span<const double> sorted_samples, const std::function<double(double)>& cdf) {
  if (sorted_samples.empty()) throw Error(ErrorCode::EmptySample, "KS statistic of an empty sample");
  const double n = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
    const double f = cdf(sorted_samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, hi - f, f - lo});
  }
  return d;
}

double ks_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b) {
  if (sorted_a.empty() || sorted_b.empty()) {
    throw Error(ErrorCode::EmptySample, "two-sample KS with an empty sample");
  }
  const double na = static_cast<double>(sorted_a.size());
  const double nb = static_cast<double>(sorted_b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sorted_a.size() && j < sorted_b.size()) {
    const double x = std::min(sorted_a[i], sorted_b[j]);
    while (i < sorted_a.size() && sorted_a[i] == x) ++i;
    while (j < sorted_b.size() && sorted_b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_one_sample(std::size_t n) {
  return kKsCoefficient01 / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return kKsCoefficient01 * std::sqrt((dn + dm) / (dn * dm));
}

double cdf_t1(const EnsembleParams& params, double t1) {
  return normal_cdf(t1, params.n_dim() / params.beta());
}

double cdf_t2(const EnsembleParams& params, double t2) {
  const double shape = params.exponent_p() + 1.5;
  if (!(shape > 0.0)) throw Error(ErrorCode::InvalidExponent, "p + 3/2 must be positive");
  if (t2 <= 0.0) return 0.0;
  return regularized_gamma_p(shape, 0.5 * params.beta() * t2);
}

Histogram Histogram::build(std::span<const double> samples, double lo, double hi, int bins) {
  if (bins < 1 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "histogram needs bins >= 1 and hi > lo");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const double x : samples) {
    if (!(x >= lo && x <= hi)) continue;
    auto b = static_cast<std::size_t>((x - lo) / (hi - lo) * bins);
    b = std::min(b, static_cast<std::size_t>(bins) - 1);
    ++h.counts[b];
    ++h.total;
  }
  return h;
}

void Histogram::merge(const Histogram& other) {
  if (other.edges != edges) throw Error(ErrorCode::InvalidArgument, "histogram edges differ");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  total += other.total;
}

double Histogram::density(std::size_t i) const {
  if (total == 0) return 0.0;
  return static_cast<double>(counts[i]) / (static_cast<double>(total) * bin_width(i));
}

MomentEstimate estimate_mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "mean of an empty sample");
  const double n = static_cast<double>(values.size());
  CompensatedSum sum;
  for (const double v : values) sum.add(v);
  const double mean = sum.value() / n;
  CompensatedSum sq;
  for (const double v : values) sq.add((v - mean) * (v - mean));
  const double var = values.size() > 1 ? sq.value() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

double z_score(const MomentEstimate& est, double expected) {
  const double diff = est.mean - expected;
  if (est.std_error > 0.0) return diff / est.std_error;
  // A constant monomial (k = n = 0) has zero spread; match it to round-off.
  if (std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(expected))) return 0.0;
  return diff > 0.0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
}

}  // namespace gbe
