// gbe: sampling, densities, moments, verification campaigns and trace bounds
// for Gaussian beta-ensembles.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbe/batch.hpp"
#include "gbe/campaign.hpp"
#include "gbe/core.hpp"
#include "gbe/distributions.hpp"
#include "gbe/domain.hpp"
#include "gbe/stats.hpp"
#include "gbe/trace_algebra.hpp"

namespace {

using gbe::format_double;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Raised for configuration problems that are not library errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  int n_dim = 4;
  double beta = 1.0;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string format = "csv";
  std::string output;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_seed) {
  cmd->add_option("--n", f.n_dim, "Matrix size N")->capture_default_str();
  cmd->add_option("--beta", f.beta, "Dyson index beta > 0")->capture_default_str();
  if (with_seed) {
    cmd->add_option("--seed", f.seed, "RNG seed (falls back to $TRACE_MOMENTS_SEED, then 0)");
    cmd->add_option("--threads", f.threads, "Worker threads, 0 = all cores")->capture_default_str();
  }
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", f.output, "Output file (default: stdout)");
}

std::uint64_t resolve_seed(const CommonFlags& f) {
  if (f.seed) return *f.seed;
  const char* env = std::getenv("TRACE_MOMENTS_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 10);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("TRACE_MOMENTS_SEED is not an unsigned integer: ") + env);
  }
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> parse_numbers(const std::string& text) {
  std::string cleaned = text;
  std::replace_if(cleaned.begin(), cleaned.end(), [](char ch) { return ch == ',' || ch == ';'; }, ' ');
  std::istringstream in(cleaned);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw UsageError("cannot parse number '" + token + "'");
    out.push_back(v);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Trace input shared by `bounds` and `standardize`.
struct TraceInput {
  std::string traces;
  std::string spectrum;
  std::string traces_file;
  int r_max = 0;
};

void add_trace_input(CLI::App* cmd, TraceInput& in) {
  auto* g = cmd->add_option_group("input", "Trace vector source");
  g->add_option("--traces", in.traces, "Comma-separated t1,t2,... (N from --n)");
  g->add_option("--spectrum", in.spectrum, "Comma-separated eigenvalues (N inferred)");
  g->add_option("--traces-file", in.traces_file, "File with t1 t2 ... separated by commas or whitespace");
  g->require_option(1);
  cmd->add_option("--r-max", in.r_max, "Traces computed from --spectrum (default 2N)");
}

gbe::TraceVector load_traces(const TraceInput& in, int n_dim) {
  if (!in.spectrum.empty()) {
    const std::vector<double> eig = parse_numbers(in.spectrum);
    if (eig.empty()) throw UsageError("--spectrum is empty");
    const gbe::Spectrum s(eig);
    const int r_max = in.r_max > 0 ? in.r_max : 2 * s.n_dim();
    return gbe::traces_from_spectrum(s, r_max);
  }
  const std::vector<double> values =
      parse_numbers(in.traces_file.empty() ? in.traces : read_file(in.traces_file));
  if (values.empty()) throw UsageError("no traces given");
  return gbe::TraceVector(n_dim, values);
}

std::string gnuplot_histogram_block(const std::string& name, const gbe::Histogram& h) {
  std::ostringstream out;
  out << '$' << name << " << EOD\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << format_double(0.5 * (h.edges[i] + h.edges[i + 1])) << ' ' << format_double(h.density(i)) << '\n';
  }
  out << "EOD\n";
  return out.str();
}

gbe::Histogram histogram_of(const std::vector<double>& values, int bins) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double a = *lo;
  double b = *hi;
  if (!(b > a)) {
    a -= 0.5;
    b += 0.5;
  }
  // Widen by a hair so the maximum lands inside the last bin.
  const double pad = 1e-9 * (b - a);
  return gbe::Histogram::build(values, a - pad, b + pad, bins);
}

void write_plot_script(const std::string& path, const gbe::EnsembleParams& params,
                       const std::vector<double>& t1, const std::vector<double>& t2, int bins,
                       const std::string& sampler) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const double n = params.n_dim();
  const double beta = params.beta();
  const double shape = params.exponent_p() + 1.5;
  out << "# Histograms of t1 and t2 (" << sampler << " sampler, N=" << params.n_dim()
      << ", beta=" << format_double(beta) << ") against the closed-form marginals.\n";
  out << "N = " << format_double(n) << "\nbeta = " << format_double(beta) << "\nshape = "
      << format_double(shape) << "\n";
  out << "q1(x) = exp(-beta*x**2/(2*N)) / sqrt(2*pi*N/beta)\n";
  out << "q2(x) = x <= 0 ? 0 : (beta/2)**shape * x**(shape-1) * exp(-beta*x/2) / gamma(shape)\n";
  out << gnuplot_histogram_block("t1", histogram_of(t1, bins));
  out << gnuplot_histogram_block("t2", histogram_of(t2, bins));
  out << "set multiplot layout 1,2\n";
  out << "set xlabel 't1'\nplot $t1 using 1:2 with boxes title 'sampled', q1(x) with lines lw 2 title 'density'\n";
  out << "set xlabel 't2'\nset xrange [0:*]\n";
  out << "plot $t2 using 1:2 with boxes title 'sampled', q2(x) with lines lw 2 title 'density'\n";
  out << "unset multiplot\n";
}

// ---------------------------------------------------------------- sample

struct SampleFlags {
  CommonFlags common;
  std::size_t n_samples = 1000;
  std::string sampler = "tridiagonal";
  int r_max = 2;
  int bins = 50;
  std::string plot_script;
  std::int64_t burn_in = 1000;
  std::int64_t thinning = 50;
};

int cmd_sample(const SampleFlags& f) {
  const auto params = gbe::EnsembleParams::make(f.common.n_dim, f.common.beta);
  const auto kind = *gbe::parse_sampler(f.sampler);
  if (f.n_samples == 0) throw UsageError("--samples must be positive");
  if (f.bins < 1) throw UsageError("--bins must be positive");
  const std::uint64_t seed = resolve_seed(f.common);

  gbe::BatchOptions opts;
  opts.r_max = f.r_max;
  opts.threads = f.common.threads;
  opts.mcmc_burn_in = f.burn_in;
  opts.mcmc_thinning = f.thinning;
  const gbe::TraceBatch batch = gbe::sample_trace_batch(kind, params, f.n_samples, seed, opts);

  Sink sink(f.common.output);
  std::ostream& out = sink.out();
  if (f.common.format == "csv") {
    for (int r = 1; r <= batch.r_max; ++r) out << (r > 1 ? "," : "") << 't' << r;
    out << '\n';
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto row = batch.row(i);
      for (std::size_t r = 0; r < row.size(); ++r) out << (r > 0 ? "," : "") << format_double(row[r]);
      out << '\n';
    }
  } else {
    nlohmann::json doc;
    doc["sampler"] = f.sampler;
    doc["n"] = params.n_dim();
    doc["beta"] = params.beta();
    doc["seed"] = seed;
    doc["n_samples"] = batch.size();
    nlohmann::json columns = nlohmann::json::array();
    for (int r = 1; r <= batch.r_max; ++r) columns.push_back("t" + std::to_string(r));
    doc["columns"] = columns;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto row = batch.row(i);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump() << '\n';
  }

  if (!f.plot_script.empty()) {
    if (batch.r_max < 2) throw UsageError("--plot-script needs --r-max >= 2");
    write_plot_script(f.plot_script, params, batch.column(1), batch.column(2), f.bins, f.sampler);
  }
  return 0;
}

// ---------------------------------------------------------------- density

struct DensityFlags {
  CommonFlags common;
  std::vector<std::string> points;
  std::string points_file;
  std::string t1_grid;
  std::string t2_grid;
};

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ':', ' ');
  const std::vector<double> parts = parse_numbers(s);
  if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
    throw UsageError(std::string(flag) + " expects lo:hi:count");
  }
  const auto count = static_cast<std::size_t>(parts[2]);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = count == 1 ? parts[0]
                        : parts[0] + (parts[1] - parts[0]) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

int cmd_density(const DensityFlags& f) {
  const auto params = gbe::EnsembleParams::make(f.common.n_dim, f.common.beta);
  gbe::require_joint_exponent(params);

  std::vector<std::pair<double, double>> probes;
  auto add_pairs = [&](const std::vector<double>& v, const std::string& what) {
    if (v.size() % 2 != 0) throw UsageError(what + " must hold t1,t2 pairs");
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) probes.emplace_back(v[i], v[i + 1]);
  };
  for (const auto& p : f.points) add_pairs(parse_numbers(p), "--point");
  if (!f.points_file.empty()) add_pairs(parse_numbers(read_file(f.points_file)), "--points-file");
  if (f.t1_grid.empty() != f.t2_grid.empty()) throw UsageError("--t1-grid and --t2-grid go together");
  if (!f.t1_grid.empty()) {
    const auto g1 = parse_grid(f.t1_grid, "--t1-grid");
    const auto g2 = parse_grid(f.t2_grid, "--t2-grid");
    for (double a : g1) {
      for (double b : g2) probes.emplace_back(a, b);
    }
  }
  if (probes.empty()) throw UsageError("give --point, --points-file or --t1-grid/--t2-grid");

  Sink sink(f.common.output);
  std::ostream& out = sink.out();
  if (f.common.format == "csv") {
    out << "t1,t2,log_q\n";
    for (const auto& [a, b] : probes) {
      out << format_double(a) << ',' << format_double(b) << ','
          << format_double(gbe::log_q_t1_t2(params, a, b).value) << '\n';
    }
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [a, b] : probes) {
      const double v = gbe::log_q_t1_t2(params, a, b).value;
      nlohmann::json row{{"t1", a}, {"t2", b}};
      if (std::isfinite(v)) {
        row["log_q"] = v;
      } else {
        row["log_q"] = format_double(v);
      }
      rows.push_back(std::move(row));
    }
    out << rows.dump(2) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- moments

struct MomentsFlags {
  CommonFlags common;
  int k = 0;
  int nn = 0;
  bool mean_t2 = false;
};

int cmd_moments(const MomentsFlags& f) {
  const auto params = gbe::EnsembleParams::make(f.common.n_dim, f.common.beta);
  if (f.k < 0 || f.nn < 0) throw UsageError("--k and --nn must be non-negative");
  const double value = f.mean_t2 ? gbe::mean_t2(params) : gbe::mixed_moment(params, f.k, f.nn);
  Sink sink(f.common.output);
  std::ostream& out = sink.out();
  if (f.common.format == "csv") {
    out << format_double(value) << '\n';
  } else {
    nlohmann::json doc{{"n", params.n_dim()}, {"beta", params.beta()}};
    if (f.mean_t2) {
      doc["quantity"] = "mean_t2";
    } else {
      doc["quantity"] = "E[t1^(2k) t2^n]";
      doc["k"] = f.k;
      doc["nn"] = f.nn;
    }
    doc["value"] = value;
    out << doc.dump(2) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
  CommonFlags common;
  std::size_t n_samples = 100000;
  std::vector<std::string> samplers;
  double z_threshold = 4.0;
  std::int64_t burn_in = 1000;
  std::int64_t thinning = 50;
};

int cmd_verify(const VerifyFlags& f) {
  const auto params = gbe::EnsembleParams::make(f.common.n_dim, f.common.beta);
  gbe::require_joint_exponent(params);
  gbe::CampaignOptions opts;
  for (const auto& s : f.samplers) opts.samplers.push_back(*gbe::parse_sampler(s));
  opts.threads = f.common.threads;
  opts.z_threshold = f.z_threshold;
  opts.mcmc_burn_in = f.burn_in;
  opts.mcmc_thinning = f.thinning;
  const std::uint64_t seed = resolve_seed(f.common);

  const auto reports = gbe::run_campaign(params, f.n_samples, seed, opts);
  {
    Sink sink(f.common.output);
    sink.out() << (f.common.format == "csv" ? gbe::reports_to_csv(reports) : gbe::reports_to_json(reports));
  }
  const auto failed = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.passed; });
  std::cerr << "verify: " << reports.size() << " checks, " << failed << " failed\n";
  for (const auto& r : reports) {
    if (!r.passed) {
      std::cerr << "  FAILED " << r.name << ": statistic " << format_double(r.statistic) << ", threshold "
                << format_double(r.threshold) << '\n';
    }
  }
  return failed == 0 ? 0 : kExitFailure;
}

// ---------------------------------------------------------------- bounds

struct TraceFlags {
  CommonFlags common;
  TraceInput input;
};

int cmd_bounds(const TraceFlags& f) {
  const gbe::TraceVector t = load_traces(f.input, f.common.n_dim);
  gbe::BoundsReport report = gbe::cauchy_schwarz_check(t);
  for (auto& c : gbe::t2_cut_check(t).checks) report.add(std::move(c));

  std::optional<gbe::DiscriminantValue> disc;
  if (t.size() >= t.n_dim()) disc = gbe::discriminant(t);
  const bool ok = report.all_satisfied && (!disc || disc->in_domain());

  Sink sink(f.common.output);
  std::ostream& out = sink.out();
  if (f.common.format == "csv") {
    out << "check,lhs,rhs,satisfied,equality\n";
    for (const auto& c : report.checks) {
      out << c.name << ',' << format_double(c.lhs) << ',' << format_double(c.rhs) << ','
          << (c.satisfied ? "true" : "false") << ',' << (c.equality ? "true" : "false") << '\n';
    }
    if (disc) {
      out << "domain:" << gbe::domain_class_name(disc->classification) << ",,,"
          << (disc->in_domain() ? "true" : "false") << ','
          << (disc->classification == gbe::DomainClass::Boundary ? "true" : "false") << '\n';
    }
  } else {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
      checks.push_back({{"check", c.name},
                        {"lhs", c.lhs},
                        {"rhs", c.rhs},
                        {"satisfied", c.satisfied},
                        {"equality", c.equality}});
    }
    nlohmann::json doc{{"n", t.n_dim()}, {"traces", std::vector<double>(t.values().begin(), t.values().end())},
                       {"checks", checks}, {"all_satisfied", ok}};
    if (disc) doc["domain"] = std::string(gbe::domain_class_name(disc->classification));
    out << doc.dump(2) << '\n';
  }
  return ok ? 0 : kExitFailure;
}

// ---------------------------------------------------------------- standardize

int cmd_standardize(const TraceFlags& f) {
  const gbe::TraceVector t = load_traces(f.input, f.common.n_dim);
  const gbe::StandardizedTraces s = gbe::standardize_traces(t);
  Sink sink(f.common.output);
  std::ostream& out = sink.out();
  const auto values = s.t_std.values();
  if (f.common.format == "csv") {
    out << "delta,c";
    for (std::size_t r = 0; r < values.size(); ++r) out << ",t" << r + 1;
    out << '\n' << format_double(s.delta) << ',' << format_double(s.c);
    for (double v : values) out << ',' << format_double(v);
    out << '\n';
  } else {
    nlohmann::json doc{{"n", t.n_dim()},
                       {"delta", s.delta},
                       {"c", s.c},
                       {"standardized_traces", std::vector<double>(values.begin(), values.end())}};
    out << doc.dump(2) << '\n';
  }
  return 0;
}

int exit_code_for(gbe::ErrorCode code) {
  switch (code) {
    case gbe::ErrorCode::NoConvergence:
    case gbe::ErrorCode::EmptySample:
    case gbe::ErrorCode::SingularSystem:
      return kExitFailure;
    default:
      return kExitUsage;
  }
}

std::vector<std::string> sampler_names() { return {"dense", "tridiagonal", "mcmc", "exact"}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian beta-ensemble trace moments: sampling, densities and verification"};
  app.require_subcommand(1);

  SampleFlags sample;
  auto* c_sample = app.add_subcommand("sample", "Draw trace vectors from a sampler");
  add_common(c_sample, sample.common, true);
  c_sample->add_option("--samples", sample.n_samples, "Number of draws")->capture_default_str();
  c_sample->add_option("--sampler", sample.sampler, "dense, tridiagonal, mcmc or exact")
      ->check(CLI::IsMember(sampler_names()))
      ->capture_default_str();
  c_sample->add_option("--r-max", sample.r_max, "Traces per row (exact: at most 2)")->capture_default_str();
  c_sample->add_option("--bins", sample.bins, "Histogram bins for --plot-script")->capture_default_str();
  c_sample->add_option("--plot-script", sample.plot_script, "Write a gnuplot script to this path");
  c_sample->add_option("--mcmc-burn-in", sample.burn_in, "Burn-in sweeps per chain")->capture_default_str();
  c_sample->add_option("--mcmc-thinning", sample.thinning, "Sweeps between emitted states")->capture_default_str();

  DensityFlags density;
  auto* c_density = app.add_subcommand("density", "Evaluate the joint log-density of (t1, t2)");
  add_common(c_density, density.common, false);
  c_density->add_option("--point", density.points, "Probe point t1,t2 (repeatable)");
  c_density->add_option("--points-file", density.points_file, "File of t1,t2 pairs");
  c_density->add_option("--t1-grid", density.t1_grid, "Grid lo:hi:count for t1");
  c_density->add_option("--t2-grid", density.t2_grid, "Grid lo:hi:count for t2");

  MomentsFlags moments;
  auto* c_moments = app.add_subcommand("moments", "Closed-form E[t1^(2k) t2^n]");
  add_common(c_moments, moments.common, false);
  c_moments->add_option("--k", moments.k, "Power 2k of t1")->capture_default_str();
  c_moments->add_option("--nn", moments.nn, "Power n of t2")->capture_default_str();
  c_moments->add_flag("--mean-t2", moments.mean_t2, "Print the mean of t2 instead");

  VerifyFlags verify;
  verify.common.format = "json";
  auto* c_verify = app.add_subcommand("verify", "Run a verification campaign against closed forms");
  add_common(c_verify, verify.common, true);
  c_verify->add_option("--samples", verify.n_samples, "Draws per sampler (>= 1000)")->capture_default_str();
  c_verify->add_option("--sampler", verify.samplers, "Restrict to these samplers (repeatable)")
      ->check(CLI::IsMember(sampler_names()));
  c_verify->add_option("--z-threshold", verify.z_threshold, "|z| limit for moment checks")->capture_default_str();
  c_verify->add_option("--mcmc-burn-in", verify.burn_in, "Burn-in sweeps per chain")->capture_default_str();
  c_verify->add_option("--mcmc-thinning", verify.thinning, "Sweeps between emitted states")->capture_default_str();

  TraceFlags bounds;
  auto* c_bounds = app.add_subcommand("bounds", "Check trace inequalities and domain membership");
  add_common(c_bounds, bounds.common, false);
  add_trace_input(c_bounds, bounds.input);

  TraceFlags standardize;
  auto* c_standardize = app.add_subcommand("standardize", "Shift and scale traces to t1 = 0, t2 = 1");
  add_common(c_standardize, standardize.common, false);
  add_trace_input(c_standardize, standardize.input);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*c_sample) return cmd_sample(sample);
    if (*c_density) return cmd_density(density);
    if (*c_moments) return cmd_moments(moments);
    if (*c_verify) return cmd_verify(verify);
    if (*c_bounds) return cmd_bounds(bounds);
    if (*c_standardize) return cmd_standardize(standardize);
  } catch (const gbe::Error& e) {
    std::cerr << "gbe: error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const UsageError& e) {
    std::cerr << "gbe: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "gbe: error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
