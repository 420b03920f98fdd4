#include "gbe/sampling.hpp"

#include <cmath>
#include <limits>

namespace gbe {

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a); done in log space so tiny shapes
    // do not underflow.
    const double g = sample_gamma(shape + 1.0, rng);
    return std::exp(std::log(g) + std::log(rng.uniform()) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_chi(double dof, RngStream& rng) {
  if (!(dof > 0.0)) throw Error(ErrorCode::InvalidArgument, "chi dof must be positive");
  double x = 0.0;
  do {
    x = std::sqrt(2.0 * sample_gamma(0.5 * dof, rng));
  } while (!(x > 0.0));
  return x;
}

MatrixSample sample_dense(const EnsembleParams& params, RngStream& rng) {
  const int n = params.n_dim();
  const double beta = params.beta();
  if (beta == 1.0) {
    const double sd_diag = 1.0;
    const double sd_off = std::sqrt(0.5);
    DenseSymmetric m{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
    for (int i = 0; i < n; ++i) {
      m.a[static_cast<std::size_t>(i) * n + i] = sd_diag * rng.normal();
      for (int j = i + 1; j < n; ++j) {
        const double x = sd_off * rng.normal();
        m.a[static_cast<std::size_t>(i) * n + j] = x;
        m.a[static_cast<std::size_t>(j) * n + i] = x;
      }
    }
    return MatrixSample(std::move(m));
  }
  if (beta == 2.0) {
    const double sd_diag = std::sqrt(0.5);
    const double sd_off = 0.5;
    DenseHermitian m{n, std::vector<std::complex<double>>(static_cast<std::size_t>(n) * n)};
    for (int i = 0; i < n; ++i) {
      m.a[static_cast<std::size_t>(i) * n + i] = sd_diag * rng.normal();
      for (int j = i + 1; j < n; ++j) {
        const double re = sd_off * rng.normal();
        const double im = sd_off * rng.normal();
        m.a[static_cast<std::size_t>(i) * n + j] = {re, im};
        m.a[static_cast<std::size_t>(j) * n + i] = {re, -im};
      }
    }
    return MatrixSample(std::move(m));
  }
  throw Error(ErrorCode::UnsupportedBeta,
              "dense sampler supports beta = 1 or 2, got " + std::to_string(beta));
}

MatrixSample sample_tridiagonal(const EnsembleParams& params, RngStream& rng) {
  const int n = params.n_dim();
  const double beta = params.beta();
  const double sd_diag = 1.0 / std::sqrt(beta);
  const double off_scale = 1.0 / std::sqrt(2.0 * beta);
  Tridiagonal m;
  m.diag.resize(static_cast<std::size_t>(n));
  m.offdiag.resize(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) m.diag[static_cast<std::size_t>(i)] = sd_diag * rng.normal();
  for (int k = 1; k < n; ++k) {
    m.offdiag[static_cast<std::size_t>(k - 1)] = off_scale * sample_chi(beta * (n - k), rng);
  }
  return MatrixSample(std::move(m));
}

double log_spectral_density_unnormalized(const EnsembleParams& params, const Spectrum& s) {
  if (s.n_dim() != params.n_dim()) {
    throw Error(ErrorCode::InvalidArgument, "spectrum length differs from N");
  }
  const auto v = s.values();
  double log_vdm = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sq += v[i] * v[i];
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double gap = std::abs(v[j] - v[i]);
      if (gap == 0.0) return -std::numeric_limits<double>::infinity();
      log_vdm += std::log(gap);
    }
  }
  return params.beta() * log_vdm - 0.5 * params.beta() * sq;
}

McmcConfig McmcConfig::defaults_for(const EnsembleParams& params, std::int64_t n_emitted) {
  McmcConfig cfg;
  cfg.burn_in = 1000;
  cfg.thinning = 50;
  cfg.n_steps = cfg.burn_in + n_emitted * cfg.thinning;
  cfg.proposal_scale = 0.5 / std::sqrt(params.beta());
  return cfg;
}

void McmcConfig::validate() const {
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "n_steps must be positive");
  if (burn_in < 0 || burn_in >= n_steps) {
    throw Error(ErrorCode::InvalidArgument, "burn_in must lie in [0, n_steps)");
  }
  if (thinning < 1) throw Error(ErrorCode::InvalidArgument, "thinning must be >= 1");
  if (!(proposal_scale > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "proposal_scale must be positive");
  }
}

MetropolisChain::MetropolisChain(const EnsembleParams& params, const McmcConfig& cfg,
                                 RngStream rng)
    : params_(params), cfg_(cfg), rng_(std::move(rng)) {
  cfg_.validate();
  const int n = params_.n_dim();
  // Evenly spaced start; burn-in forgets it.
  const double spacing = 1.0 / std::sqrt(params_.beta());
  state_.resize(static_cast<std::size_t>(n));
  order_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    state_[static_cast<std::size_t>(i)] = (i - 0.5 * (n - 1)) * spacing;
    order_[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  }
}

void MetropolisChain::sweep() {
  const double beta = params_.beta();
  for (std::size_t i = order_.size(); i > 1; --i) {
    std::swap(order_[i - 1], order_[rng_.below(i)]);
  }
  for (const std::size_t i : order_) {
    const double x = state_[i];
    const double y = x + cfg_.proposal_scale * rng_.normal();
    double log_ratio = -0.5 * beta * (y * y - x * x);
    bool collision = false;
    for (std::size_t j = 0; j < state_.size(); ++j) {
      if (j == i) continue;
      const double gy = std::abs(y - state_[j]);
      if (gy == 0.0) {
        collision = true;
        break;
      }
      log_ratio += beta * (std::log(gy) - std::log(std::abs(x - state_[j])));
    }
    ++proposals_;
    if (collision) continue;
    if (log_ratio >= 0.0 || std::log(rng_.uniform()) < log_ratio) {
      state_[i] = y;
      ++accepted_;
    }
  }
  ++sweeps_;
}

std::optional<Spectrum> MetropolisChain::next() {
  while (sweeps_ < cfg_.burn_in) sweep();
  if (sweeps_ + cfg_.thinning > cfg_.n_steps) return std::nullopt;
  for (std::int64_t k = 0; k < cfg_.thinning; ++k) sweep();
  return Spectrum(state_);
}

double MetropolisChain::acceptance_rate() const noexcept {
  return proposals_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposals_);
}

std::vector<Spectrum> sample_spectrum_mcmc(const EnsembleParams& params, const McmcConfig& cfg,
                                           RngStream rng) {
  MetropolisChain chain(params, cfg, std::move(rng));
  std::vector<Spectrum> out;
  out.reserve(static_cast<std::size_t>(cfg.emitted_count()));
  while (auto s = chain.next()) out.push_back(std::move(*s));
  return out;
}

}  // namespace gbe
