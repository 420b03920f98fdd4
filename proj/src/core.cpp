#include "gbe/core.hpp"

#include <algorithm>
#include <cmath>

namespace gbe {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveN: return "NonPositiveN";
    case ErrorCode::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorCode::UnsupportedBeta: return "UnsupportedBeta";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::NonPositiveT2: return "NonPositiveT2";
    case ErrorCode::InsufficientTraces: return "InsufficientTraces";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

EnsembleParams EnsembleParams::make(int n_dim, double beta) {
  if (n_dim < 1) {
    throw Error(ErrorCode::NonPositiveN, "matrix size must be >= 1, got " + std::to_string(n_dim));
  }
  // Written as a negated comparison so NaN is rejected too.
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::NonPositiveBeta, "beta must be a positive finite real");
  }
  return EnsembleParams(n_dim, beta);
}

double EnsembleParams::exponent_p() const noexcept {
  const double n = n_dim_;
  return (beta_ * n * n + (2.0 - beta_) * n - 6.0) / 4.0;
}

EnsembleParams make_params(int n_dim, double beta) { return EnsembleParams::make(n_dim, beta); }

double exponent_p(const EnsembleParams& params) { return params.exponent_p(); }

void require_joint_exponent(const EnsembleParams& params) {
  if (!(params.exponent_p() + 1.0 > 0.0)) {
    throw Error(ErrorCode::InvalidExponent,
                "p = " + std::to_string(params.exponent_p()) +
                    " <= -1; the joint (t1, t2) law needs N >= 2");
  }
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorCode::NonPositiveN, "spectrum must contain at least one eigenvalue");
  }
  std::sort(values_.begin(), values_.end());
}

TraceVector::TraceVector(int n_dim, std::vector<double> values)
    : n_dim_(n_dim), values_(std::move(values)) {
  if (n_dim_ < 1) {
    throw Error(ErrorCode::NonPositiveN, "trace vector needs N >= 1");
  }
}

double TraceVector::t(int r) const {
  if (r == 0) return static_cast<double>(n_dim_);
  if (r < 0 || r > size()) {
    throw Error(ErrorCode::InsufficientTraces,
                "t_" + std::to_string(r) + " requested, only " + std::to_string(size()) +
                    " traces stored");
  }
  return values_[static_cast<std::size_t>(r - 1)];
}

std::string_view matrix_kind_name(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::DenseRealSymmetric: return "dense-real-symmetric";
    case MatrixKind::DenseComplexHermitian: return "dense-complex-hermitian";
    case MatrixKind::Tridiagonal: return "tridiagonal";
  }
  return "unknown";
}

MatrixSample::MatrixSample(Payload payload) : payload_(std::move(payload)) {}

MatrixKind MatrixSample::kind() const noexcept {
  switch (payload_.index()) {
    case 0: return MatrixKind::DenseRealSymmetric;
    case 1: return MatrixKind::DenseComplexHermitian;
    default: return MatrixKind::Tridiagonal;
  }
}

int MatrixSample::n_dim() const noexcept {
  return std::visit(
      [](const auto& m) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Tridiagonal>) {
          return m.n();
        } else {
          return m.n;
        }
      },
      payload_);
}

}  // namespace gbe
