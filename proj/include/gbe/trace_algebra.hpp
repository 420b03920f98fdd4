#pragma once

#include <vector>

#include "gbe/core.hpp"

namespace gbe {

/// Coefficients of Phi(x) = det(x I - M) = sum_k c_k x^{N-k}, with c_0 = 1.
struct SecularCoefficients {
  int n_dim = 0;
  std::vector<double> c;

  /// Phi evaluated at x by Horner's rule.
  double evaluate(double x) const;
};

/// N x N moment matrix V V^T with entry (i, j) = t_{i+j} and t_0 = N.
struct HankelMatrix {
  int n_dim = 0;
  std::vector<double> entries;  // row-major
  double operator()(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * n_dim + j];
  }
};

enum class DomainClass { Interior, Boundary, Exterior };

std::string_view domain_class_name(DomainClass c);

struct DiscriminantValue {
  DomainClass classification = DomainClass::Exterior;
  /// ln|G(t)| = (1/2) ln det(V V^T); -inf unless interior.
  double log_abs_G = 0.0;

  /// The indicator chi(t): true on the closed discriminant domain.
  bool in_domain() const noexcept { return classification != DomainClass::Exterior; }
};

inline constexpr double kDefaultDiscriminantTol = 1e-10;

TraceVector traces_from_spectrum(const Spectrum& s, int r_max);

/// tr(M^r) for r = 1..r_max by repeated multiplication. Tridiagonal input
/// uses banded products whose bandwidth grows by one per power.
TraceVector traces_from_matrix(const MatrixSample& m, int r_max);

/// Newton's identities via k c_k = -sum_{i=1..k} c_{k-i} t_i. Needs at
/// least N traces.
SecularCoefficients newton_coefficients(const TraceVector& t);

/// Appends t_{N+1}..t_{N+r_extra} from the characteristic-polynomial
/// recurrence t_{N+r} = -sum_k c_k t_{N+r-k}. Only the first N entries of t
/// are used.
TraceVector extend_traces(const TraceVector& t, int r_extra);

/// Hankel matrix from a trace vector holding at least 2N - 2 traces.
HankelMatrix hankel_matrix(const TraceVector& t);

/// Classifies t (first N entries) against the discriminant domain and, for
/// interior points, returns ln|G(t)|.
DiscriminantValue discriminant(const TraceVector& t, double tol = kDefaultDiscriminantTol);

/// Traces of the spectrum shifted by delta (binomial recombination).
TraceVector shift_traces(const TraceVector& t, double delta);

/// Traces of the spectrum scaled by c: t'_k = c^k t_k.
TraceVector scale_traces(const TraceVector& t, double c);

struct StandardizedTraces {
  double delta = 0.0;
  double c = 0.0;
  TraceVector t_std;
};

/// Shift and scale to t_1 = 0, t_2 = 1: delta = t_1 / N,
/// c = sqrt(t_2 - t_1^2 / N). Throws DegenerateScale if c^2 <= 0.
StandardizedTraces standardize_traces(const TraceVector& t);

}  // namespace gbe
