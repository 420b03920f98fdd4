#include "gbe/trace_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gbe/special.hpp"

namespace gbe {

namespace {

// Newton sums, the recurrence, the shift and the Hankel factorization lose
// up to ~15 digits to cancellation at N ~ 10. They run in quad precision so
// that the rounding of the double inputs is the only error that matters.
#ifdef __SIZEOF_FLOAT128__
using Wide = __float128;
#else
using Wide = long double;
#endif

Wide wabs(Wide x) { return x < 0 ? -x : x; }

// Extended-precision guess refined by one Newton step.
Wide wsqrt(Wide x) {
  if (!(x > 0)) return 0;
  const Wide y = std::sqrt(static_cast<long double>(x));
  return 0.5L * (y + x / y);
}

// ln x to long-double accuracy, plenty for the log-domain outputs.
Wide wlog(Wide x) { return std::log(static_cast<long double>(x)); }

void require_traces(const TraceVector& t, int count, const char* what) {
  if (t.size() < count) {
    throw Error(ErrorCode::InsufficientTraces, std::string(what) + " needs " +
                                                   std::to_string(count) + " traces, got " +
                                                   std::to_string(t.size()));
  }
}

// c_0..c_N from t_1..t_N (index 0 of `t` holds t_1).
std::vector<Wide> newton_wide(const std::vector<Wide>& t, int n) {
  std::vector<Wide> c(static_cast<std::size_t>(n) + 1, 0.0L);
  c[0] = 1.0L;
  for (int k = 1; k <= n; ++k) {
    Wide acc = 0.0L;
    for (int i = 1; i <= k; ++i) acc += c[static_cast<std::size_t>(k - i)] * t[static_cast<std::size_t>(i - 1)];
    c[static_cast<std::size_t>(k)] = -acc / static_cast<Wide>(k);
  }
  return c;
}

// Extends t (holding t_1..t_N) in place to t_1..t_{N + extra}.
void extend_wide(std::vector<Wide>& t, int n, int extra) {
  const auto c = newton_wide(t, n);
  t.resize(static_cast<std::size_t>(n));
  for (int r = 1; r <= extra; ++r) {
    const int m = n + r;
    Wide acc = 0.0L;
    for (int k = 1; k <= n; ++k) {
      const int idx = m - k;  // t_idx, idx >= 1 here
      acc += c[static_cast<std::size_t>(k)] * t[static_cast<std::size_t>(idx - 1)];
    }
    t.push_back(-acc);
  }
}

std::vector<Wide> binomial_row(int k) {
  std::vector<Wide> row(static_cast<std::size_t>(k) + 1, 1.0L);
  for (int l = 1; l < k; ++l) {
    row[static_cast<std::size_t>(l)] = row[static_cast<std::size_t>(l - 1)] * (k - l + 1) / l;
  }
  return row;
}

// sum_l C(k,l) delta^l t_{k-l}, t_0 = N.
Wide shifted_trace(const std::vector<Wide>& t, int n, int k, Wide delta) {
  const auto binom = binomial_row(k);
  Wide acc = 0.0L;
  Wide dpow = 1.0L;
  for (int l = 0; l <= k; ++l) {
    const int idx = k - l;
    const Wide tv = idx == 0 ? static_cast<Wide>(n) : t[static_cast<std::size_t>(idx - 1)];
    acc += binom[static_cast<std::size_t>(l)] * dpow * tv;
    dpow *= delta;
  }
  return acc;
}

std::vector<Wide> widen(const TraceVector& t, int count) {
  std::vector<Wide> w(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) w[static_cast<std::size_t>(i)] = t.values()[static_cast<std::size_t>(i)];
  return w;
}

// Standardized moments s_1..s_{2N-2} of the first N raw traces: shifted to
// s_1 = 0, scaled to s_2 = 1 and extended by the recurrence. `scale`
// receives c = sqrt(t_2 - t_1^2 / N), which must be positive.
std::vector<Wide> standardized_moments(const std::vector<Wide>& raw, int n, Wide& scale) {
  const Wide t1 = raw[0];
  const Wide delta = t1 / n;
  scale = wsqrt((n * raw[1] - t1 * t1) / n);
  std::vector<Wide> s(static_cast<std::size_t>(n));
  Wide cpow = 1.0L;
  for (int k = 1; k <= n; ++k) {
    cpow *= scale;
    s[static_cast<std::size_t>(k - 1)] = shifted_trace(raw, n, k, -delta) / cpow;
  }
  s[0] = 0.0L;
  if (n >= 2) s[1] = 1.0L;
  extend_wide(s, n, n - 2);
  return s;
}

// Pivoted LDL^T of the equilibrated moment matrix a_ij = e_i e_j s_{i+j}.
//
// Entry (i, k) of every Schur complement equals L(P_i P_k), where L is the
// moment functional x^j -> s_j and P_i are polynomials tracked through their
// monomial coefficients. `moment_shift[m]` holds the change of s_1..s_{2N-2}
// when raw trace m moves by its assumed error, so the noise level of an
// entry is sum_m |L_shift_m(P_i P_k)|. Entries below their noise level count
// as zero. Returns the classification and the sum of log pivots.
DiscriminantValue factorize(std::vector<Wide> a, int n, const std::vector<Wide>& equil,
                            const std::vector<std::vector<Wide>>& moment_shift) {
  const auto un = static_cast<std::size_t>(n);
  auto at = [&](int i, int j) -> Wide& { return a[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)]; };
  std::vector<std::vector<Wide>> poly(un, std::vector<Wide>(un, 0.0L));
  for (std::size_t i = 0; i < un; ++i) poly[i][i] = equil[i];
  std::vector<Wide> prod(2 * un - 1);
  auto noise = [&](int i, int k) {
    const auto& p = poly[static_cast<std::size_t>(i)];
    const auto& q = poly[static_cast<std::size_t>(k)];
    std::fill(prod.begin(), prod.end(), 0.0L);
    for (std::size_t x = 0; x < un; ++x) {
      if (p[x] == 0) continue;
      for (std::size_t y = 0; y < un; ++y) prod[x + y] += p[x] * q[y];
    }
    Wide acc = 0.0L;
    for (const auto& shift : moment_shift) {
      Wide d = 0.0L;
      for (std::size_t j = 1; j < prod.size(); ++j) d += prod[j] * shift[j - 1];
      acc += wabs(d);
    }
    return acc;
  };
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<int> rest(un);
  for (int i = 0; i < n; ++i) rest[static_cast<std::size_t>(i)] = i;
  Wide log_det = 0.0L;
  while (!rest.empty()) {
    // Largest diagonal first; if it is lost in the noise, any diagonal that
    // is not.
    std::size_t pick = 0;
    for (std::size_t r = 1; r < rest.size(); ++r) {
      if (at(rest[r], rest[r]) > at(rest[pick], rest[pick])) pick = r;
    }
    if (!(at(rest[pick], rest[pick]) > noise(rest[pick], rest[pick]))) {
      bool found = false;
      Wide best = 0.0L;
      for (std::size_t r = 0; r < rest.size(); ++r) {
        const int i = rest[r];
        const Wide d = at(i, i);
        const Wide f = noise(i, i);
        if (d < -f) return {DomainClass::Exterior, kNegInf};
        if (d > f && (!found || d / f > best)) {
          found = true;
          best = d / f;
          pick = r;
        }
      }
      if (!found) {
        // Every remaining diagonal is zero within noise. Off-diagonals must
        // then fit a PSD matrix inside the noise band: |a_ik| may not exceed
        // its own noise plus the geometric mean of the largest admissible
        // diagonals.
        for (std::size_t r = 0; r < rest.size(); ++r) {
          const int i = rest[r];
          for (std::size_t q = r + 1; q < rest.size(); ++q) {
            const int k = rest[q];
            const Wide room = wsqrt((at(i, i) + noise(i, i)) * (at(k, k) + noise(k, k)));
            if (wabs(at(i, k)) > noise(i, k) + room) return {DomainClass::Exterior, kNegInf};
          }
        }
        return {DomainClass::Boundary, kNegInf};
      }
    }
    const int pj = rest[pick];
    const Wide d = at(pj, pj);
    log_det += wlog(d);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
    for (const int i : rest) {
      const Wide lij = at(i, pj) / d;
      for (const int k : rest) at(i, k) -= lij * at(pj, k);
      for (std::size_t x = 0; x < un; ++x) {
        poly[static_cast<std::size_t>(i)][x] -= lij * poly[static_cast<std::size_t>(pj)][x];
      }
    }
  }
  return {DomainClass::Interior, static_cast<double>(log_det)};
}

// Fully degenerate candidate: t_k must equal N delta^k.
DiscriminantValue classify_degenerate(const std::vector<Wide>& t, int n, Wide delta, Wide tol) {
  const Wide spread = wsqrt(t[1] / n);
  Wide dpow = 1.0L;
  Wide mag = 1.0L;
  for (int k = 1; k <= n; ++k) {
    dpow *= delta;
    mag *= wabs(delta) + spread;
    const Wide expect = n * dpow;
    if (wabs(t[static_cast<std::size_t>(k - 1)] - expect) > 16 * tol * n * mag) {
      return {DomainClass::Exterior, -std::numeric_limits<double>::infinity()};
    }
  }
  return {DomainClass::Boundary, -std::numeric_limits<double>::infinity()};
}

}  // namespace

std::string_view domain_class_name(DomainClass c) {
  switch (c) {
    case DomainClass::Interior: return "interior";
    case DomainClass::Boundary: return "boundary";
    case DomainClass::Exterior: return "exterior";
  }
  return "unknown";
}

double SecularCoefficients::evaluate(double x) const {
  double acc = 0.0;
  for (const double ck : c) acc = acc * x + ck;
  return acc;
}

TraceVector traces_from_spectrum(const Spectrum& s, int r_max) {
  if (r_max < 1) throw Error(ErrorCode::InvalidArgument, "r_max must be >= 1");
  const auto lambda = s.values();
  std::vector<double> power(lambda.begin(), lambda.end());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(r_max));
  for (int r = 1; r <= r_max; ++r) {
    CompensatedSum sum;
    for (std::size_t k = 0; k < power.size(); ++k) {
      sum.add(power[k]);
      power[k] *= lambda[k];
    }
    out.push_back(sum.value());
  }
  return TraceVector(s.n_dim(), std::move(out));
}

namespace {

template <typename T>
std::vector<double> dense_traces(int n, const std::vector<T>& m, int r_max) {
  auto idx = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(r_max));
  std::vector<T> power = m;
  std::vector<T> next(m.size());
  for (int r = 1; r <= r_max; ++r) {
    // tr(P M) without forming the product.
    if (r == 1) {
      CompensatedSum sum;
      for (int i = 0; i < n; ++i) sum.add(std::real(m[idx(i, i)]));
      out.push_back(sum.value());
      continue;
    }
    CompensatedSum sum;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) sum.add(std::real(power[idx(i, j)] * m[idx(j, i)]));
    }
    out.push_back(sum.value());
    if (r == r_max) break;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        T acc{};
        for (int k = 0; k < n; ++k) acc += power[idx(i, k)] * m[idx(k, j)];
        next[idx(i, j)] = acc;
      }
    }
    std::swap(power, next);
  }
  return out;
}

std::vector<double> tridiagonal_traces(const Tridiagonal& m, int r_max) {
  const int n = m.n();
  const auto& d = m.diag;
  const auto& e = m.offdiag;
  auto idx = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  std::vector<double> power(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    power[idx(i, i)] = d[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      power[idx(i, i + 1)] = e[static_cast<std::size_t>(i)];
      power[idx(i + 1, i)] = e[static_cast<std::size_t>(i)];
    }
  }
  std::vector<double> next(power.size(), 0.0);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(r_max));
  int bw = 1;  // bandwidth of `power` = current exponent
  CompensatedSum first;
  for (int i = 0; i < n; ++i) first.add(d[static_cast<std::size_t>(i)]);
  out.push_back(first.value());
  for (int r = 2; r <= r_max; ++r) {
    CompensatedSum sum;
    for (int i = 0; i < n; ++i) {
      sum.add(power[idx(i, i)] * d[static_cast<std::size_t>(i)]);
      if (i + 1 < n) sum.add(power[idx(i, i + 1)] * e[static_cast<std::size_t>(i)]);
      if (i > 0) sum.add(power[idx(i, i - 1)] * e[static_cast<std::size_t>(i - 1)]);
    }
    out.push_back(sum.value());
    if (r == r_max) break;
    const int nbw = bw + 1;
    for (int i = 0; i < n; ++i) {
      const int lo = std::max(0, i - nbw);
      const int hi = std::min(n - 1, i + nbw);
      for (int j = lo; j <= hi; ++j) {
        double acc = 0.0;
        // (P M)_ij = P_{i,j-1} e_{j-1} + P_ij d_j + P_{i,j+1} e_j, P banded.
        if (j - 1 >= 0 && std::abs(i - (j - 1)) <= bw) acc += power[idx(i, j - 1)] * e[static_cast<std::size_t>(j - 1)];
        if (std::abs(i - j) <= bw) acc += power[idx(i, j)] * d[static_cast<std::size_t>(j)];
        if (j + 1 < n && std::abs(i - (j + 1)) <= bw) acc += power[idx(i, j + 1)] * e[static_cast<std::size_t>(j)];
        next[idx(i, j)] = acc;
      }
    }
    std::swap(power, next);
    bw = nbw;
  }
  return out;
}

}  // namespace

TraceVector traces_from_matrix(const MatrixSample& m, int r_max) {
  if (r_max < 1) throw Error(ErrorCode::InvalidArgument, "r_max must be >= 1");
  std::vector<double> out = std::visit(
      [r_max](const auto& mat) -> std::vector<double> {
        using M = std::decay_t<decltype(mat)>;
        if constexpr (std::is_same_v<M, Tridiagonal>) {
          return tridiagonal_traces(mat, r_max);
        } else {
          return dense_traces(mat.n, mat.a, r_max);
        }
      },
      m.payload());
  return TraceVector(m.n_dim(), std::move(out));
}

SecularCoefficients newton_coefficients(const TraceVector& t) {
  const int n = t.n_dim();
  require_traces(t, n, "newton_coefficients");
  const auto c = newton_wide(widen(t, n), n);
  SecularCoefficients out{n, {}};
  out.c.reserve(c.size());
  for (const Wide ck : c) out.c.push_back(static_cast<double>(ck));
  return out;
}

TraceVector extend_traces(const TraceVector& t, int r_extra) {
  const int n = t.n_dim();
  require_traces(t, n, "extend_traces");
  if (r_extra < 0) throw Error(ErrorCode::InvalidArgument, "r_extra must be >= 0");
  auto w = widen(t, n);
  extend_wide(w, n, r_extra);
  std::vector<double> out(w.begin(), w.end());
  return TraceVector(n, std::move(out));
}

HankelMatrix hankel_matrix(const TraceVector& t) {
  const int n = t.n_dim();
  require_traces(t, 2 * n - 2, "hankel_matrix");
  HankelMatrix h{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) h.entries[static_cast<std::size_t>(i) * n + j] = t.t(i + j);
  }
  return h;
}

DiscriminantValue discriminant(const TraceVector& t, double tol) {
  const int n = t.n_dim();
  require_traces(t, n, "discriminant");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(t.values()[static_cast<std::size_t>(i)])) {
      throw Error(ErrorCode::InvalidArgument, "discriminant of non-finite traces");
    }
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "discriminant tolerance must be positive");
  if (n == 1) return {DomainClass::Interior, 0.0};

  const Wide wtol = tol;
  const auto w = widen(t, n);
  const Wide t1 = w[0];
  const Wide t2 = w[1];
  const Wide var = (n * t2 - t1 * t1) / n;
  const Wide scale2 = std::max(wabs(t2), t1 * t1 / n);
  if (var < -wtol * scale2) return {DomainClass::Exterior, -std::numeric_limits<double>::infinity()};
  if (var <= wtol * scale2) return classify_degenerate(w, n, t1 / n, wtol);

  // Work at t_1 = 0, t_2 = 1: both the discriminant domain and the sign of
  // the discriminant are invariant, and ln G picks up (N(N-1)/2) ln c.
  Wide c = 0.0L;
  const auto s = standardized_moments(w, n, c);

  // Magnitude of each raw trace, sum_k |lambda_k|^m: even m is t_m itself,
  // odd m is bounded by sqrt(t_{m-1} t_{m+1}).
  auto raw_ext = w;
  extend_wide(raw_ext, n, 1);
  auto raw = [&](int m) { return m == 0 ? static_cast<Wide>(n) : wabs(raw_ext[static_cast<std::size_t>(m - 1)]); };
  std::vector<std::vector<Wide>> moment_shift;
  for (int m = 1; m <= n; ++m) {
    const Wide mag = m % 2 == 0 ? raw(m) : wsqrt(raw(m - 1) * raw(m + 1));
    if (!(mag > 0)) continue;
    auto moved = w;
    moved[static_cast<std::size_t>(m - 1)] += wtol * mag;
    Wide c_moved = 0.0L;
    if (!((n * moved[1] - moved[0] * moved[0]) > 0)) continue;
    auto s_moved = standardized_moments(moved, n, c_moved);
    for (std::size_t j = 0; j < s_moved.size(); ++j) s_moved[j] -= s[j];
    moment_shift.push_back(std::move(s_moved));
  }

  auto ts = [&](int r) -> Wide { return r == 0 ? static_cast<Wide>(n) : s[static_cast<std::size_t>(r - 1)]; };
  std::vector<Wide> equil(static_cast<std::size_t>(n));
  Wide log_scale = 0.0L;
  for (int i = 0; i < n; ++i) {
    const Wide d = ts(2 * i);
    if (d > 0) {
      equil[static_cast<std::size_t>(i)] = 1.0L / wsqrt(d);
      log_scale += wlog(d);
    } else {
      equil[static_cast<std::size_t>(i)] = 1.0L;
    }
  }
  std::vector<Wide> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(i) * n + j] =
          ts(i + j) * equil[static_cast<std::size_t>(i)] * equil[static_cast<std::size_t>(j)];
    }
  }
  DiscriminantValue out = factorize(std::move(a), n, equil, moment_shift);
  if (out.classification == DomainClass::Interior) {
    const Wide pairs = static_cast<Wide>(n) * (n - 1) / 2;
    out.log_abs_G =
        static_cast<double>(0.5L * (static_cast<Wide>(out.log_abs_G) + log_scale) + pairs * wlog(c));
  }
  return out;
}

TraceVector shift_traces(const TraceVector& t, double delta) {
  const int k_max = t.size();
  const auto w = widen(t, k_max);
  std::vector<double> out(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    out[static_cast<std::size_t>(k - 1)] = static_cast<double>(shifted_trace(w, t.n_dim(), k, delta));
  }
  return TraceVector(t.n_dim(), std::move(out));
}

TraceVector scale_traces(const TraceVector& t, double c) {
  std::vector<double> out(t.values().begin(), t.values().end());
  double cpow = 1.0;
  for (double& v : out) {
    cpow *= c;
    v *= cpow;
  }
  return TraceVector(t.n_dim(), std::move(out));
}

StandardizedTraces standardize_traces(const TraceVector& t) {
  const int n = t.n_dim();
  require_traces(t, 2, "standardize_traces");
  const Wide t1 = t.t(1);
  const Wide t2 = t.t(2);
  const Wide var = (n * t2 - t1 * t1) / n;
  // Exact degeneracy rarely survives rounding, so a few ulps of t_2 count as zero.
  if (!(var > 64 * std::numeric_limits<double>::epsilon() * wabs(t2))) {
    throw Error(ErrorCode::DegenerateScale, "t2 - t1^2/N is not positive");
  }
  const Wide delta = t1 / n;
  const Wide c = wsqrt(var);
  const auto w = widen(t, t.size());
  std::vector<double> out(static_cast<std::size_t>(t.size()));
  Wide cpow = 1.0L;
  for (int k = 1; k <= t.size(); ++k) {
    cpow *= c;
    out[static_cast<std::size_t>(k - 1)] = static_cast<double>(shifted_trace(w, n, k, -delta) / cpow);
  }
  return {static_cast<double>(delta), static_cast<double>(c), TraceVector(n, std::move(out))};
}

}  // namespace gbe
