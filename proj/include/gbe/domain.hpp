#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gbe/core.hpp"

namespace gbe {

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  /// lhs == rhs up to round-off (the inequality is tight).
  bool equality = false;
};

struct BoundsReport {
  std::vector<BoundCheck> checks;
  bool all_satisfied = true;

  void add(BoundCheck check);
};

/// Extremal configuration: distinct increasing roots with positive integer
/// multiplicities summing to N.
struct ExtremalPattern {
  std::vector<double> roots;
  std::vector<int> multiplicities;

  int n_dim() const;
  /// Throws InvalidArgument unless the invariants hold.
  void validate() const;
};

/// Relative slack used for "lhs <= rhs" and equality decisions.
inline constexpr double kBoundsRelTol = 1e-12;

/// Cauchy-Schwarz family: t_r^2 <= N t_{2r} for 2r <= K, and
/// t_{p+q}^2 <= t_{2p} t_{2q} for 1 <= p < q, 2q <= K.
BoundsReport cauchy_schwarz_check(const TraceVector& t);

/// Smallest t2 compatible with t1 over N real eigenvalues: t1^2 / N.
double min_t2_given_t1(double t1, int n_dim);

/// Bounds on t_idx (idx >= 3) on the t2 = const cut. Odd idx = 2m+1:
/// |t_idx| <= t2^{m+1/2}. Even idx = 2m: N^{1-m} t2^m <= t_idx <= t2^m.
/// The odd lower bound is reported as -t2^{m+1/2}.
std::pair<double, double> t2_cut_bounds(double t2, int n_dim, int idx);

/// Applies t2_cut_bounds to every stored t_idx, idx >= 3.
BoundsReport t2_cut_check(const TraceVector& t);

/// t_l = sum_i p_i r_i^l for l = 1..l_max.
TraceVector traces_from_pattern(const ExtremalPattern& pat, int l_max);

/// max_j |(k+1) r_j^k - (mu_1 + mu_2 r_j + ... + mu_k r_j^{k-1})| over the
/// roots of the pattern. Zero iff the pattern is a stationary point of
/// sum lambda^{k+1} under the first k trace constraints.
double lagrange_residual(const ExtremalPattern& pat, const std::vector<double>& multipliers, int k);

/// Solves the k x k Vandermonde system for the multipliers. Needs exactly k
/// distinct roots (SingularSystem otherwise).
std::vector<double> solve_multipliers(const ExtremalPattern& pat, int k);

}  // namespace gbe
