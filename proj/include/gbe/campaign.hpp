#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gbe/batch.hpp"
#include "gbe/core.hpp"

namespace gbe {

/// Outcome of one oracle-vs-closed-form comparison.
struct VerificationReport {
  enum class Kind { Bound, AbsBound };

  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  long long n_samples = 0;
  bool passed = false;
  /// Bound: passed = statistic <= threshold (KS distances, counts).
  /// AbsBound: passed = |statistic| <= threshold (z-scores).
  Kind kind = Kind::Bound;
  std::map<std::string, std::string> details;

  static VerificationReport bound(std::string name, double statistic, double threshold,
                                  long long n_samples);
  static VerificationReport abs_bound(std::string name, double statistic, double threshold,
                                      long long n_samples);
};

struct CampaignOptions {
  std::vector<SamplerKind> samplers;
  unsigned threads = 0;
  /// |z| limit for moment checks.
  double z_threshold = 4.0;
  std::int64_t mcmc_burn_in = 1000;
  std::int64_t mcmc_thinning = 50;
};

/// Every sampler applicable to the params: dense only for beta in {1, 2}.
std::vector<SamplerKind> default_samplers(const EnsembleParams& params);

/// Per sampler: KS of t1 and t2 against the closed-form marginals, z-scores
/// of E[t1^{2k} t2^n] for k, n in {0, 1, 2}, and a domain check of every
/// sampled trace vector. Across samplers: two-sample KS of t1 and t2 for
/// every pair. Needs n_samples >= 1000.
std::vector<VerificationReport> run_campaign(const EnsembleParams& params, std::size_t n_samples,
                                             std::uint64_t seed, const CampaignOptions& opts);

std::vector<VerificationReport> run_campaign(const EnsembleParams& params, std::size_t n_samples,
                                             std::uint64_t seed,
                                             const std::vector<SamplerKind>& samplers);

bool all_passed(const std::vector<VerificationReport>& reports);

/// JSON array, one object per report.
std::string reports_to_json(const std::vector<VerificationReport>& reports);

/// CSV with columns name,statistic,threshold,passed,seed,n,beta,n_samples.
std::string reports_to_csv(const std::vector<VerificationReport>& reports);

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);

}  // namespace gbe
