#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gbe/core.hpp"
#include "gbe/rng.hpp"

namespace gbe {

/// Gamma(shape, scale = 1) variate, Marsaglia-Tsang with the shape < 1 boost.
double sample_gamma(double shape, RngStream& rng);

/// Chi variate with (possibly fractional) dof degrees of freedom: sqrt(2 G),
/// G ~ Gamma(dof / 2). Always strictly positive.
double sample_chi(double dof, RngStream& rng);

/// Dense GOE (beta = 1) or GUE (beta = 2) draw. Each independent real
/// coefficient is Normal(0, (1 + delta_ij) / (2 beta)); only the upper
/// triangle is drawn and then mirrored.
MatrixSample sample_dense(const EnsembleParams& params, RngStream& rng);

/// Symmetric tridiagonal draw for any beta > 0 whose eigenvalue law has
/// weight |Vandermonde|^beta exp(-(beta/2) sum lambda^2): diagonal
/// Normal(0, 1/beta), sub-diagonal k (1-based) chi_{beta (N - k)} / sqrt(2 beta).
MatrixSample sample_tridiagonal(const EnsembleParams& params, RngStream& rng);

/// beta sum_{mu<nu} ln|lambda_mu - lambda_nu| - (beta/2) sum lambda^2;
/// -inf when two eigenvalues coincide.
double log_spectral_density_unnormalized(const EnsembleParams& params, const Spectrum& s);

struct McmcConfig {
  /// Total sweeps, burn-in included. A sweep updates every eigenvalue once in
  /// a random order.
  std::int64_t n_steps = 0;
  std::int64_t burn_in = 0;
  std::int64_t thinning = 1;
  /// Standard deviation of the per-eigenvalue Gaussian proposal.
  double proposal_scale = 0.5;

  /// Defaults used by the verification harness; proposal 0.5/sqrt(beta).
  static McmcConfig defaults_for(const EnsembleParams& params, std::int64_t n_emitted);
  void validate() const;
  std::int64_t emitted_count() const { return (n_steps - burn_in) / thinning; }
};

/// Metropolis chain on the eigenvalue JPDF. Emits a sorted Spectrum every
/// `thinning` sweeps once burn-in is over.
class MetropolisChain {
 public:
  MetropolisChain(const EnsembleParams& params, const McmcConfig& cfg, RngStream rng);

  /// Next emitted state, or nullopt once n_steps sweeps have been run.
  std::optional<Spectrum> next();

  double acceptance_rate() const noexcept;
  std::int64_t sweeps_done() const noexcept { return sweeps_; }

 private:
  void sweep();

  EnsembleParams params_;
  McmcConfig cfg_;
  RngStream rng_;
  std::vector<double> state_;
  std::vector<std::size_t> order_;
  std::int64_t sweeps_ = 0;
  std::int64_t proposals_ = 0;
  std::int64_t accepted_ = 0;
};

/// Runs a full chain and collects every emitted spectrum.
std::vector<Spectrum> sample_spectrum_mcmc(const EnsembleParams& params, const McmcConfig& cfg,
                                           RngStream rng);

}  // namespace gbe
