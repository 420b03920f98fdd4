#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gbe/core.hpp"

namespace gbe {

/// One-sample Kolmogorov-Smirnov statistic D_n = sup |F_n - F| for sorted
/// samples. Throws EmptySample on empty input.
double ks_statistic(std::span<const double> sorted_samples, const std::function<double(double)>& cdf);

/// Two-sample statistic D_{n,m} for two sorted samples.
double ks_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b);

/// Asymptotic 1%-level coefficient c(0.01) = sqrt(-ln(0.005) / 2) ~= 1.628.
inline constexpr double kKsCoefficient01 = 1.63;

/// 1.63 / sqrt(n).
double ks_critical_one_sample(std::size_t n);

/// 1.63 sqrt((n + m) / (n m)).
double ks_critical_two_sample(std::size_t n, std::size_t m);

/// CDF of t1: Normal(0, N/beta).
double cdf_t1(const EnsembleParams& params, double t1);

/// CDF of t2: P(p + 3/2, beta t2 / 2); 0 for t2 <= 0.
double cdf_t2(const EnsembleParams& params, double t2);

struct Histogram {
  std::vector<double> edges;
  std::vector<long long> counts;
  long long total = 0;

  /// B equal bins on [lo, hi]; samples outside are ignored and not counted
  /// in `total`.
  static Histogram build(std::span<const double> samples, double lo, double hi, int bins);

  /// Adds another histogram with identical edges.
  void merge(const Histogram& other);

  double bin_width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  /// Count normalised to a density over the whole sample.
  double density(std::size_t i) const;
};

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean of the values and its standard error (sample sd / sqrt(n)).
MomentEstimate estimate_mean(std::span<const double> values);

/// (estimate - expected) / std_error. With zero std_error the result is 0 if
/// the means agree to round-off and +-inf otherwise.
double z_score(const MomentEstimate& est, double expected);

}  // namespace gbe
