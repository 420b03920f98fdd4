#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gbe {

enum class ErrorCode {
  NonPositiveN,
  NonPositiveBeta,
  UnsupportedBeta,
  InvalidExponent,
  NonPositiveT2,
  InsufficientTraces,
  DegenerateScale,
  SingularSystem,
  EmptySample,
  NoConvergence,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code);

/// Library error. The message always starts with the error name so that
/// command-line front ends can surface it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Size N and Dyson index beta of a Gaussian beta-ensemble. beta is any
/// positive real.
class EnsembleParams {
 public:
  static EnsembleParams make(int n_dim, double beta);

  int n_dim() const noexcept { return n_dim_; }
  double beta() const noexcept { return beta_; }

  /// (beta N^2 + (2 - beta) N - 6) / 4, the power of (t2 - t1^2/N) in the
  /// joint density of the first two traces.
  double exponent_p() const noexcept;

  friend bool operator==(const EnsembleParams&, const EnsembleParams&) = default;

 private:
  EnsembleParams(int n_dim, double beta) : n_dim_(n_dim), beta_(beta) {}
  int n_dim_;
  double beta_;
};

EnsembleParams make_params(int n_dim, double beta);
double exponent_p(const EnsembleParams& params);

/// Throws InvalidExponent unless p + 1 > 0 (which holds exactly when N >= 2).
void require_joint_exponent(const EnsembleParams& params);

/// Real eigenvalues, stored in ascending order.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  int n_dim() const noexcept { return static_cast<int>(values_.size()); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> values_;
};

/// Power sums t_1..t_K of an N-point spectrum. t_0 = N is implied and never
/// stored.
class TraceVector {
 public:
  TraceVector(int n_dim, std::vector<double> values);

  int n_dim() const noexcept { return n_dim_; }
  /// Number of stored traces K.
  int size() const noexcept { return static_cast<int>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }

  /// t_r for 0 <= r <= K, with t_0 = N.
  double t(int r) const;

  friend bool operator==(const TraceVector&, const TraceVector&) = default;

 private:
  int n_dim_;
  std::vector<double> values_;
};

enum class MatrixKind { DenseRealSymmetric, DenseComplexHermitian, Tridiagonal };

std::string_view matrix_kind_name(MatrixKind kind);

/// Row-major N x N real symmetric matrix.
struct DenseSymmetric {
  int n = 0;
  std::vector<double> a;
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Row-major N x N complex Hermitian matrix.
struct DenseHermitian {
  int n = 0;
  std::vector<std::complex<double>> a;
  std::complex<double> operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * n + j];
  }
};

/// Symmetric tridiagonal matrix; offdiag[k] couples rows k and k+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
  int n() const noexcept { return static_cast<int>(diag.size()); }
};

/// A single ensemble draw in one of the supported storage layouts.
class MatrixSample {
 public:
  using Payload = std::variant<DenseSymmetric, DenseHermitian, Tridiagonal>;

  explicit MatrixSample(Payload payload);

  MatrixKind kind() const noexcept;
  int n_dim() const noexcept;
  const Payload& payload() const noexcept { return payload_; }

 private:
  Payload payload_;
};

}  // namespace gbe
