#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "gbe/campaign.hpp"
#include "gbe/distributions.hpp"
#include "gbe/special.hpp"
#include "gbe/stats.hpp"
#include "test_support.hpp"

using namespace gbe;
using testing::rel_err;

TEST_CASE("special functions against the standard library and closed forms") {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 7.25, 33.3, 170.5, 1e4}) {
    CHECK(testing::mixed_err(log_gamma(x), std::lgamma(x)) <= 1e-13);
  }
  CHECK(std::abs(log_gamma(1.0)) <= 1e-15);
  CHECK(std::abs(log_gamma(2.0)) <= 1e-15);
  for (double x : {0.0, 0.3, 1.0, 4.0, 30.0}) {
    CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
    // Shape 1/2: P = erf(sqrt(x)).
    CHECK(regularized_gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-13));
    CHECK(regularized_gamma_p(3.7, x) + regularized_gamma_q(3.7, x) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(normal_cdf(0.0, 3.0) == 0.5);
  CHECK(normal_cdf(std::sqrt(2.0), 2.0) == doctest::Approx(0.5 * (1.0 + std::erf(1.0 / std::sqrt(2.0)))));
}

TEST_CASE("KS statistic examples") {
  const std::vector<double> half{0.5};
  CHECK(ks_statistic(half, [](double x) { return std::clamp(x, 0.0, 1.0); }) == 0.5);
  try {
    (void)ks_statistic(std::vector<double>{}, [](double) { return 0.0; });
    FAIL("expected EmptySample");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySample);
  }
  CHECK(ks_critical_one_sample(10000) == doctest::Approx(0.0163));
  CHECK(ks_critical_two_sample(100, 100) == doctest::Approx(1.63 * std::sqrt(0.02)));

  // Uniform grid midpoints are the closest possible sample: D = 1/(2n).
  std::vector<double> grid(100);
  for (int i = 0; i < 100; ++i) grid[static_cast<std::size_t>(i)] = (i + 0.5) / 100.0;
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_statistic(grid, uniform) == doctest::Approx(0.005));

  double last = 0.0;
  for (double shift : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    std::vector<double> moved = grid;
    for (auto& x : moved) x += shift;
    const double d = ks_statistic(moved, uniform);
    CHECK(d >= last);
    last = d;
  }

  CHECK(ks_two_sample(grid, grid) == 0.0);
  std::vector<double> other = grid;
  for (auto& x : other) x += 0.253;
  // Just below the first shifted point 26 of the grid points are already counted.
  CHECK(ks_two_sample(grid, other) == doctest::Approx(0.26));
}

TEST_CASE("KS null calibration") {
  const auto params = make_params(4, 1.0);
  RngStream rng(81, 0);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = std::sqrt(4.0) * rng.normal();
  std::sort(xs.begin(), xs.end());
  CHECK(ks_statistic(xs, [&](double x) { return cdf_t1(params, x); }) <= ks_critical_one_sample(xs.size()));
}

TEST_CASE("t2 CDF limits and median") {
  const auto params = make_params(4, 1.0);
  CHECK(cdf_t2(params, 0.0) == 0.0);
  CHECK(cdf_t2(params, -3.0) == 0.0);
  CHECK(cdf_t2(params, 1e6) == 1.0);
  RngStream rng(82, 0);
  std::vector<double> t2s(100000);
  for (auto& t : t2s) t = sample_t1_t2_exact(params, rng).second;
  std::nth_element(t2s.begin(), t2s.begin() + 50000, t2s.end());
  const double median = t2s[50000];
  CHECK(cdf_t2(params, median) >= 0.49);
  CHECK(cdf_t2(params, median) <= 0.51);

  // A shape of exactly 1 (p = -1/2) is unreachable for N >= 2, so the
  // exponential special case is checked on the underlying incomplete gamma.
  for (double x : {0.2, 2.0, 9.0}) CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  // N = 1 still has a valid t2 law (shape 1/2): t2 = lambda^2 is chi-squared with one degree of freedom.
  for (double x : {0.3, 1.0, 4.0}) CHECK(cdf_t2(make_params(1, 1.0), x) == doctest::Approx(std::erf(std::sqrt(x / 2.0))).epsilon(1e-13));
}

TEST_CASE("histogram") {
  const std::vector<double> xs{-1.0, 0.0, 0.1, 0.5, 0.99, 1.0, 2.0};
  const auto h = Histogram::build(xs, 0.0, 1.0, 4);
  REQUIRE(h.edges.size() == 5);
  CHECK(h.edges.front() == 0.0);
  CHECK(h.edges.back() == 1.0);
  CHECK(h.counts == std::vector<long long>{2, 0, 1, 2});
  CHECK(h.total == 5);
  long long sum = 0;
  for (auto c : h.counts) sum += c;
  CHECK(sum == h.total);
  double area = 0.0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) area += h.density(i) * h.bin_width(i);
  CHECK(area == doctest::Approx(1.0));

  auto merged = h;
  merged.merge(Histogram::build(std::vector<double>{0.3}, 0.0, 1.0, 4));
  CHECK(merged.total == 6);
  CHECK(merged.counts[1] == 1);
  try {
    merged.merge(Histogram::build(std::vector<double>{0.3}, 0.0, 2.0, 4));
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("mean estimate and z-score") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto est = estimate_mean(xs);
  CHECK(est.mean == 2.5);
  CHECK(est.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(z_score(est, 2.5) == 0.0);
  CHECK(z_score(est, 2.0) == doctest::Approx(0.5 / est.std_error));
  const std::vector<double> same{2.0, 2.0};
  CHECK(z_score(estimate_mean(same), 2.0) == 0.0);
  CHECK(std::isinf(z_score(estimate_mean(same), 3.0)));
  try {
    (void)estimate_mean(std::vector<double>{});
    FAIL("expected EmptySample");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySample);
  }
}

TEST_CASE("campaign at N=4, beta=1 passes every check") {
  const auto reports = run_campaign(make_params(4, 1.0), 100000, 42, CampaignOptions{});
  // 4 samplers x (2 KS + 9 moments + 1 domain) + 6 pairs x 2.
  CHECK(reports.size() == 4 * 12 + 12);
  for (const auto& r : reports) {
    INFO(r.name << " statistic=" << r.statistic << " threshold=" << r.threshold);
    CHECK(r.passed);
  }
  CHECK(all_passed(reports));
}

TEST_CASE("campaign reports are deterministic and thread-count independent") {
  const auto params = make_params(3, 2.5);
  CampaignOptions one;
  one.threads = 1;
  CampaignOptions many;
  many.threads = 4;
  const auto a = run_campaign(params, 5000, 7, one);
  const auto b = run_campaign(params, 5000, 7, many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].statistic == b[i].statistic);
    CHECK(a[i].details == b[i].details);
  }
  CHECK(reports_to_json(a) == reports_to_json(b));
  CHECK(reports_to_csv(a) == reports_to_csv(b));
}

TEST_CASE("campaign with the exact sampler at N=2, beta=2") {
  const auto reports = run_campaign(make_params(2, 2.0), 10000, 11, {SamplerKind::Exact});
  const auto it = std::find_if(reports.begin(), reports.end(),
                               [](const auto& r) { return r.name == "exact/moment_t1^0_t2^1"; });
  REQUIRE(it != reports.end());
  CHECK(it->details.at("expected") == "2");
  const double empirical = std::stod(it->details.at("empirical"));
  const double se = std::stod(it->details.at("std_error"));
  CHECK(std::abs(empirical - 2.0) <= 3.0 * se);
}

TEST_CASE("campaign guards") {
  for (auto [n, samples] : {std::pair{1, std::size_t{5000}}, {3, std::size_t{999}}}) {
    try {
      (void)run_campaign(make_params(n, 1.0), samples, 1, CampaignOptions{});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK((e.code() == ErrorCode::InvalidExponent || e.code() == ErrorCode::InvalidArgument));
      if (n == 1) CHECK(e.code() == ErrorCode::InvalidExponent);
    }
  }
}

TEST_CASE("exact-sampler KS false alarm rate under the null") {
  const auto params = make_params(3, 1.0);
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto reports = run_campaign(params, 10000, seed, {SamplerKind::Exact});
    for (const auto& r : reports) {
      if (r.name == "exact/ks_t1" || r.name == "exact/ks_t2") failures += !r.passed;
    }
  }
  // 200 tests at the 1% level: a 2% rate is 4 failures.
  CHECK(failures <= 4);
}

TEST_CASE("report serialization") {
  auto ok = VerificationReport::bound("a/ks_t1", 0.01, 0.02, 1000);
  ok.details["seed"] = "5";
  ok.details["n"] = "4";
  ok.details["beta"] = "1";
  auto bad = VerificationReport::abs_bound("a/moment", -std::numeric_limits<double>::infinity(), 4.0, 1000);
  CHECK(ok.passed);
  CHECK_FALSE(bad.passed);
  CHECK(VerificationReport::abs_bound("z", -3.9, 4.0, 10).passed);
  CHECK_FALSE(VerificationReport::bound("z", -3.9, -4.0, 10).passed);

  const auto json = nlohmann::json::parse(reports_to_json({ok, bad}));
  REQUIRE(json.size() == 2);
  CHECK(json[0]["name"] == "a/ks_t1");
  CHECK(json[0]["passed"] == true);
  CHECK(json[0]["details"]["seed"] == "5");
  CHECK(json[1]["statistic"] == "-inf");
  CHECK(json[1]["check"] == "|statistic|<=threshold");

  const auto csv = reports_to_csv({ok, bad});
  CHECK(csv.rfind("name,statistic,threshold,passed,seed,n,beta,n_samples\n", 0) == 0);
  CHECK(csv.find("a/ks_t1,0.01,0.02,true,5,4,1,1000\n") != std::string::npos);
  CHECK(csv.find("a/moment,-inf,4,false,,,,1000\n") != std::string::npos);

  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::nan("")) == "nan");
}
