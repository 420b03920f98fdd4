#include "gbe/campaign.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "gbe/distributions.hpp"
#include "gbe/domain.hpp"
#include "gbe/stats.hpp"
#include "gbe/trace_algebra.hpp"

namespace gbe {

VerificationReport VerificationReport::bound(std::string name, double statistic, double threshold,
                                             long long n_samples) {
  VerificationReport r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.n_samples = n_samples;
  r.kind = Kind::Bound;
  r.passed = statistic <= threshold;
  return r;
}

VerificationReport VerificationReport::abs_bound(std::string name, double statistic,
                                                 double threshold, long long n_samples) {
  VerificationReport r = bound(std::move(name), statistic, threshold, n_samples);
  r.kind = Kind::AbsBound;
  r.passed = std::abs(statistic) <= threshold;
  return r;
}

std::vector<SamplerKind> default_samplers(const EnsembleParams& params) {
  std::vector<SamplerKind> out;
  if (params.beta() == 1.0 || params.beta() == 2.0) out.push_back(SamplerKind::Dense);
  out.push_back(SamplerKind::Tridiagonal);
  out.push_back(SamplerKind::Mcmc);
  out.push_back(SamplerKind::Exact);
  return out;
}

namespace {

struct SamplerData {
  SamplerKind kind;
  std::vector<double> t1_sorted;
  std::vector<double> t2_sorted;
};

// Number of sampled trace vectors that fall outside the discriminant domain
// or break a Cauchy-Schwarz inequality.
long long count_domain_failures(const EnsembleParams& params, const TraceBatch& batch) {
  const int n = params.n_dim();
  long long failures = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto row = batch.row(i);
    TraceVector t(n, std::vector<double>(row.begin(), row.end()));
    if (batch.r_max >= n) {
      if (!discriminant(t).in_domain()) {
        ++failures;
        continue;
      }
      t = extend_traces(t, n);
    }
    if (!cauchy_schwarz_check(t).all_satisfied) ++failures;
  }
  return failures;
}

}  // namespace

std::vector<VerificationReport> run_campaign(const EnsembleParams& params, std::size_t n_samples,
                                             std::uint64_t seed, const CampaignOptions& opts) {
  require_joint_exponent(params);
  if (n_samples < 1000) throw Error(ErrorCode::InvalidArgument, "campaigns need at least 1000 samples");
  const std::vector<SamplerKind> samplers = opts.samplers.empty() ? default_samplers(params) : opts.samplers;
  const auto n = static_cast<long long>(n_samples);

  std::vector<VerificationReport> reports;
  auto tag = [&](VerificationReport r, std::string_view sampler) {
    r.details["seed"] = std::to_string(seed);
    r.details["n"] = std::to_string(params.n_dim());
    r.details["beta"] = format_double(params.beta());
    if (!sampler.empty()) r.details["sampler"] = std::string(sampler);
    reports.push_back(std::move(r));
  };

  std::vector<SamplerData> collected;
  for (const SamplerKind kind : samplers) {
    BatchOptions bopts;
    bopts.r_max = kind == SamplerKind::Exact ? 2 : std::max(2, params.n_dim());
    bopts.threads = opts.threads;
    bopts.mcmc_burn_in = opts.mcmc_burn_in;
    bopts.mcmc_thinning = opts.mcmc_thinning;
    const TraceBatch batch = sample_trace_batch(kind, params, n_samples, seed, bopts);
    const std::string name(sampler_name(kind));

    SamplerData data{kind, batch.column(1), batch.column(2)};
    const std::vector<double> t1 = data.t1_sorted;
    const std::vector<double> t2 = data.t2_sorted;
    std::sort(data.t1_sorted.begin(), data.t1_sorted.end());
    std::sort(data.t2_sorted.begin(), data.t2_sorted.end());

    const double crit = ks_critical_one_sample(n_samples);
    tag(VerificationReport::bound(name + "/ks_t1",
                                  ks_statistic(data.t1_sorted, [&](double x) { return cdf_t1(params, x); }),
                                  crit, n),
        name);
    tag(VerificationReport::bound(name + "/ks_t2",
                                  ks_statistic(data.t2_sorted, [&](double x) { return cdf_t2(params, x); }),
                                  crit, n),
        name);

    std::vector<double> monomial(n_samples);
    for (int k = 0; k <= 2; ++k) {
      for (int m = 0; m <= 2; ++m) {
        for (std::size_t i = 0; i < n_samples; ++i) {
          monomial[i] = std::pow(t1[i], 2 * k) * std::pow(t2[i], m);
        }
        const double expected = mixed_moment(params, k, m);
        const MomentEstimate est = estimate_mean(monomial);
        VerificationReport r = VerificationReport::abs_bound(
            name + "/moment_t1^" + std::to_string(2 * k) + "_t2^" + std::to_string(m),
            z_score(est, expected), opts.z_threshold, n);
        r.details["expected"] = format_double(expected);
        r.details["empirical"] = format_double(est.mean);
        r.details["std_error"] = format_double(est.std_error);
        tag(std::move(r), name);
      }
    }

    tag(VerificationReport::bound(name + "/domain_failures",
                                  static_cast<double>(count_domain_failures(params, batch)), 0.0, n),
        name);
    collected.push_back(std::move(data));
  }

  for (std::size_t a = 0; a < collected.size(); ++a) {
    for (std::size_t b = a + 1; b < collected.size(); ++b) {
      const std::string pair = std::string(sampler_name(collected[a].kind)) + "_vs_" +
                               std::string(sampler_name(collected[b].kind));
      const double crit = ks_critical_two_sample(n_samples, n_samples);
      tag(VerificationReport::bound("ks2_t1/" + pair,
                                    ks_two_sample(collected[a].t1_sorted, collected[b].t1_sorted),
                                    crit, n),
          "");
      tag(VerificationReport::bound("ks2_t2/" + pair,
                                    ks_two_sample(collected[a].t2_sorted, collected[b].t2_sorted),
                                    crit, n),
          "");
    }
  }
  return reports;
}

std::vector<VerificationReport> run_campaign(const EnsembleParams& params, std::size_t n_samples,
                                             std::uint64_t seed,
                                             const std::vector<SamplerKind>& samplers) {
  CampaignOptions opts;
  opts.samplers = samplers;
  return run_campaign(params, n_samples, seed, opts);
}

bool all_passed(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string reports_to_json(const std::vector<VerificationReport>& reports) {
  auto number = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return format_double(x);
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json obj;
    obj["name"] = r.name;
    obj["statistic"] = number(r.statistic);
    obj["threshold"] = number(r.threshold);
    obj["n_samples"] = r.n_samples;
    obj["passed"] = r.passed;
    obj["check"] = r.kind == VerificationReport::Kind::Bound ? "statistic<=threshold"
                                                              : "|statistic|<=threshold";
    obj["details"] = r.details;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  out << "name,statistic,threshold,passed,seed,n,beta,n_samples\n";
  auto detail = [](const VerificationReport& r, const std::string& key) {
    const auto it = r.details.find(key);
    return it == r.details.end() ? std::string() : it->second;
  };
  for (const auto& r : reports) {
    out << r.name << ',' << format_double(r.statistic) << ',' << format_double(r.threshold) << ','
        << (r.passed ? "true" : "false") << ',' << detail(r, "seed") << ',' << detail(r, "n") << ','
        << detail(r, "beta") << ',' << r.n_samples << '\n';
  }
  return out.str();
}

}  // namespace gbe
