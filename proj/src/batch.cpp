#include "gbe/batch.hpp"

#include <algorithm>
#include <cmath>

#include "gbe/distributions.hpp"
#include "gbe/rng.hpp"
#include "gbe/sampling.hpp"
#include "gbe/trace_algebra.hpp"

namespace gbe {

std::string_view sampler_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Dense: return "dense";
    case SamplerKind::Tridiagonal: return "tridiagonal";
    case SamplerKind::Mcmc: return "mcmc";
    case SamplerKind::Exact: return "exact";
  }
  return "unknown";
}

std::optional<SamplerKind> parse_sampler(std::string_view name) {
  for (const auto kind : {SamplerKind::Dense, SamplerKind::Tridiagonal, SamplerKind::Mcmc,
                          SamplerKind::Exact}) {
    if (sampler_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::uint64_t batch_stream_id(SamplerKind kind, std::uint64_t chunk) {
  return ((static_cast<std::uint64_t>(kind) + 1) << 40) | chunk;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> TraceBatch::column(int r) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i * static_cast<std::size_t>(r_max) + static_cast<std::size_t>(r - 1)];
  return out;
}

TraceBatch sample_trace_batch(SamplerKind kind, const EnsembleParams& params, std::size_t n_samples,
                              std::uint64_t seed, const BatchOptions& opts) {
  if (opts.r_max < 1) throw Error(ErrorCode::InvalidArgument, "r_max must be >= 1");
  if (kind == SamplerKind::Exact) {
    if (opts.r_max > 2) {
      throw Error(ErrorCode::InvalidArgument, "the exact sampler only produces t1 and t2");
    }
    require_joint_exponent(params);
  }
  if (kind == SamplerKind::Dense && params.beta() != 1.0 && params.beta() != 2.0) {
    throw Error(ErrorCode::UnsupportedBeta, "dense sampler supports beta = 1 or 2");
  }
  const auto r_max = static_cast<std::size_t>(opts.r_max);
  TraceBatch batch{opts.r_max, std::vector<double>(n_samples * r_max)};
  const std::size_t n_chunks = (n_samples + kBatchChunk - 1) / kBatchChunk;

  auto store = [&](std::size_t row, const TraceVector& t) {
    std::copy(t.values().begin(), t.values().end(), batch.data.begin() + static_cast<std::ptrdiff_t>(row * r_max));
  };

  parallel_chunks(n_chunks, opts.threads, [&](std::size_t chunk) {
    const std::size_t begin = chunk * kBatchChunk;
    const std::size_t end = std::min(n_samples, begin + kBatchChunk);
    RngStream rng(seed, batch_stream_id(kind, chunk));
    switch (kind) {
      case SamplerKind::Dense:
        for (std::size_t i = begin; i < end; ++i) store(i, traces_from_matrix(sample_dense(params, rng), opts.r_max));
        break;
      case SamplerKind::Tridiagonal:
        for (std::size_t i = begin; i < end; ++i) {
          store(i, traces_from_matrix(sample_tridiagonal(params, rng), opts.r_max));
        }
        break;
      case SamplerKind::Mcmc: {
        McmcConfig cfg;
        cfg.burn_in = opts.mcmc_burn_in;
        cfg.thinning = opts.mcmc_thinning;
        cfg.n_steps = cfg.burn_in + static_cast<std::int64_t>(end - begin) * cfg.thinning;
        cfg.proposal_scale = opts.mcmc_proposal_scale.value_or(0.5 / std::sqrt(params.beta()));
        MetropolisChain chain(params, cfg, std::move(rng));
        for (std::size_t i = begin; i < end; ++i) store(i, traces_from_spectrum(*chain.next(), opts.r_max));
        break;
      }
      case SamplerKind::Exact:
        for (std::size_t i = begin; i < end; ++i) {
          const auto [t1, t2] = sample_t1_t2_exact(params, rng);
          batch.data[i * r_max] = t1;
          if (r_max > 1) batch.data[i * r_max + 1] = t2;
        }
        break;
    }
  });
  return batch;
}

}  // namespace gbe
