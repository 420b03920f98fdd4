#include "gbe/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gbe {

namespace {

BoundCheck make_check(std::string name, double lhs, double rhs) {
  const double slack = kBoundsRelTol * std::max(std::abs(lhs), std::abs(rhs));
  BoundCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.satisfied = lhs <= rhs + slack;
  c.equality = std::abs(lhs - rhs) <= slack;
  return c;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

void BoundsReport::add(BoundCheck check) {
  all_satisfied = all_satisfied && check.satisfied;
  checks.push_back(std::move(check));
}

int ExtremalPattern::n_dim() const {
  int n = 0;
  for (const int p : multiplicities) n += p;
  return n;
}

void ExtremalPattern::validate() const {
  if (roots.empty() || roots.size() != multiplicities.size()) {
    throw Error(ErrorCode::InvalidArgument, "pattern needs matching, non-empty roots and multiplicities");
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (multiplicities[i] < 1) throw Error(ErrorCode::InvalidArgument, "multiplicities must be positive");
    if (i > 0 && !(roots[i] > roots[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "pattern roots must be strictly increasing");
    }
  }
}

BoundsReport cauchy_schwarz_check(const TraceVector& t) {
  BoundsReport report;
  const int k_max = t.size();
  const double n = t.n_dim();
  for (int r = 1; 2 * r <= k_max; ++r) {
    const double tr = t.t(r);
    report.add(make_check("t" + std::to_string(r) + "^2 <= N*t" + std::to_string(2 * r), tr * tr,
                          n * t.t(2 * r)));
  }
  for (int q = 2; 2 * q <= k_max; ++q) {
    for (int p = 1; p < q; ++p) {
      const double tpq = t.t(p + q);
      report.add(make_check("t" + std::to_string(p + q) + "^2 <= t" + std::to_string(2 * p) + "*t" +
                                std::to_string(2 * q),
                            tpq * tpq, t.t(2 * p) * t.t(2 * q)));
    }
  }
  return report;
}

double min_t2_given_t1(double t1, int n_dim) {
  if (n_dim < 1) throw Error(ErrorCode::NonPositiveN, "N must be >= 1");
  return t1 * t1 / n_dim;
}

std::pair<double, double> t2_cut_bounds(double t2, int n_dim, int idx) {
  if (!(t2 > 0.0)) throw Error(ErrorCode::NonPositiveT2, "t2 must be positive");
  if (n_dim < 1) throw Error(ErrorCode::NonPositiveN, "N must be >= 1");
  if (idx < 3) throw Error(ErrorCode::InvalidArgument, "t2-cut bounds apply to t_3 and above");
  if (idx % 2 == 1) {
    const int m = (idx - 1) / 2;
    const double b = std::pow(t2, m + 0.5);
    return {-b, b};
  }
  const int m = idx / 2;
  const double upper = ipow(t2, m);
  return {std::pow(static_cast<double>(n_dim), 1 - m) * upper, upper};
}

BoundsReport t2_cut_check(const TraceVector& t) {
  BoundsReport report;
  if (t.size() < 2 || !(t.t(2) > 0.0)) return report;
  const double t2 = t.t(2);
  for (int idx = 3; idx <= t.size(); ++idx) {
    const auto [lo, hi] = t2_cut_bounds(t2, t.n_dim(), idx);
    const double ti = t.t(idx);
    const std::string name = "t" + std::to_string(idx);
    if (idx % 2 == 1) {
      report.add(make_check("|" + name + "| <= t2^" + std::to_string(idx / 2) + ".5", std::abs(ti), hi));
    } else {
      report.add(make_check("N^(1-" + std::to_string(idx / 2) + ")*t2^" + std::to_string(idx / 2) +
                                " <= " + name,
                            lo, ti));
      report.add(make_check(name + " <= t2^" + std::to_string(idx / 2), ti, hi));
    }
  }
  return report;
}

TraceVector traces_from_pattern(const ExtremalPattern& pat, int l_max) {
  pat.validate();
  if (l_max < 1) throw Error(ErrorCode::InvalidArgument, "l_max must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(l_max), 0.0);
  for (std::size_t i = 0; i < pat.roots.size(); ++i) {
    double pw = 1.0;
    for (int l = 1; l <= l_max; ++l) {
      pw *= pat.roots[i];
      out[static_cast<std::size_t>(l - 1)] += pat.multiplicities[i] * pw;
    }
  }
  return TraceVector(pat.n_dim(), std::move(out));
}

double lagrange_residual(const ExtremalPattern& pat, const std::vector<double>& multipliers, int k) {
  if (k < 1 || static_cast<int>(multipliers.size()) != k) {
    throw Error(ErrorCode::InvalidArgument, "need exactly k multipliers");
  }
  double worst = 0.0;
  for (const double r : pat.roots) {
    // mu_1 + mu_2 r + ... + mu_k r^{k-1} by Horner.
    double poly = 0.0;
    for (int m = k - 1; m >= 0; --m) poly = poly * r + multipliers[static_cast<std::size_t>(m)];
    worst = std::max(worst, std::abs((k + 1) * ipow(r, k) - poly));
  }
  return worst;
}

std::vector<double> solve_multipliers(const ExtremalPattern& pat, int k) {
  if (k < 1 || static_cast<int>(pat.roots.size()) > k) {
    throw Error(ErrorCode::InvalidArgument, "pattern must have exactly k roots");
  }
  if (static_cast<int>(pat.roots.size()) < k) {
    throw Error(ErrorCode::SingularSystem, "fewer than k distinct roots make the multiplier system singular");
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (pat.roots[static_cast<std::size_t>(i)] == pat.roots[static_cast<std::size_t>(j)]) {
        throw Error(ErrorCode::SingularSystem, "repeated roots make the multiplier system singular");
      }
    }
  }
  // Rows: r_j^0 .. r_j^{k-1} | (k+1) r_j^k.
  const auto kk = static_cast<std::size_t>(k);
  std::vector<double> a(kk * (kk + 1));
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * (kk + 1) + j]; };
  for (std::size_t j = 0; j < kk; ++j) {
    const double r = pat.roots[j];
    double pw = 1.0;
    for (std::size_t m = 0; m < kk; ++m) {
      at(j, m) = pw;
      pw *= r;
    }
    at(j, kk) = (k + 1) * pw;
  }
  for (std::size_t col = 0; col < kk; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < kk; ++i) {
      if (std::abs(at(i, col)) > std::abs(at(piv, col))) piv = i;
    }
    if (at(piv, col) == 0.0) throw Error(ErrorCode::SingularSystem, "zero pivot");
    if (piv != col) {
      for (std::size_t m = 0; m <= kk; ++m) std::swap(at(piv, m), at(col, m));
    }
    for (std::size_t i = col + 1; i < kk; ++i) {
      const double f = at(i, col) / at(col, col);
      for (std::size_t m = col; m <= kk; ++m) at(i, m) -= f * at(col, m);
    }
  }
  std::vector<double> mu(kk);
  for (std::size_t i = kk; i-- > 0;) {
    double acc = at(i, kk);
    for (std::size_t m = i + 1; m < kk; ++m) acc -= at(i, m) * mu[m];
    mu[i] = acc / at(i, i);
  }
  return mu;
}

}  // namespace gbe
