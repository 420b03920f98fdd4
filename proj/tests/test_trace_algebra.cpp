#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gbe/trace_algebra.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gbe;
using testing::mixed_err;
using testing::rel_err;

namespace {

std::vector<double> vals(const TraceVector& t) { return {t.values().begin(), t.values().end()}; }

TraceVector tr(std::vector<double> eig, int r_max) { return traces_from_spectrum(Spectrum(std::move(eig)), r_max); }

double abs_power_sum(std::span<const double> eig, int r) {
  double s = 0.0;
  for (double x : eig) s += std::pow(std::abs(x), r);
  return s;
}

}  // namespace

TEST_CASE("traces from spectra") {
  CHECK(vals(tr({1, 2}, 3)) == std::vector<double>{3, 5, 9});
  CHECK(vals(tr({0, 0, 0}, 5)) == std::vector<double>(5, 0.0));
  CHECK(vals(tr({-1, 1}, 4)) == std::vector<double>{0, 2, 0, 2});
}

TEST_CASE("traces from matrices") {
  CHECK(vals(traces_from_matrix(MatrixSample(DenseSymmetric{2, {1, 0, 0, 2}}), 3)) == std::vector<double>{3, 5, 9});
  CHECK(vals(traces_from_matrix(MatrixSample(DenseSymmetric{2, {0, 0, 0, 0}}), 3)) == std::vector<double>(3, 0.0));
  const double b = 0.7;
  const auto t = traces_from_matrix(MatrixSample(Tridiagonal{{0, 0}, {b}}), 2);
  CHECK(t.t(1) == 0.0);
  CHECK(t.t(2) == doctest::Approx(2 * b * b));
}

TEST_CASE("matrix traces agree with the spectrum of the same matrix") {
  // Q diag(lambda) Q^T with Q a product of Givens rotations, in long double.
  RngStream rng(21, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));
    const auto eig = testing::random_eigenvalues(rng, n);
    std::vector<long double> q(static_cast<std::size_t>(n * n), 0.0L);
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i * n + i)] = 1.0L;
    for (int g = 0; g < 3 * n; ++g) {
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int j = (i + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)))) % n;
      const long double th = 2.0L * std::numbers::pi_v<long double> * rng.uniform();
      const long double c = std::cos(th), s = std::sin(th);
      for (int k = 0; k < n; ++k) {
        const long double a = q[static_cast<std::size_t>(k * n + i)], bb = q[static_cast<std::size_t>(k * n + j)];
        q[static_cast<std::size_t>(k * n + i)] = c * a - s * bb;
        q[static_cast<std::size_t>(k * n + j)] = s * a + c * bb;
      }
    }
    DenseSymmetric m{n, std::vector<double>(static_cast<std::size_t>(n * n))};
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        long double v = 0.0L;
        for (int k = 0; k < n; ++k) v += q[static_cast<std::size_t>(i * n + k)] * eig[static_cast<std::size_t>(k)] * q[static_cast<std::size_t>(j * n + k)];
        m.a[static_cast<std::size_t>(i * n + j)] = m.a[static_cast<std::size_t>(j * n + i)] = static_cast<double>(v);
      }
    }
    const auto got = traces_from_matrix(MatrixSample(m), 6);
    const auto want = testing::power_sums(eig, 6);
    for (int r = 1; r <= 6; ++r) {
      CHECK(std::abs(got.t(r) - want[static_cast<std::size_t>(r - 1)]) <= 1e-10 * abs_power_sum(eig, r));
    }
  }
}

TEST_CASE("tridiagonal and dense trace paths agree") {
  RngStream rng(22, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(9));
    Tridiagonal t;
    for (int i = 0; i < n; ++i) t.diag.push_back(rng.normal());
    for (int i = 0; i + 1 < n; ++i) t.offdiag.push_back(std::abs(rng.normal()) + 0.1);
    DenseSymmetric d{n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
    for (int i = 0; i < n; ++i) d.a[static_cast<std::size_t>(i * n + i)] = t.diag[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < n; ++i) {
      d.a[static_cast<std::size_t>(i * n + i + 1)] = d.a[static_cast<std::size_t>((i + 1) * n + i)] = t.offdiag[static_cast<std::size_t>(i)];
    }
    const auto a = traces_from_matrix(MatrixSample(t), 8);
    const auto b = traces_from_matrix(MatrixSample(d), 8);
    for (int r = 1; r <= 8; ++r) CHECK(mixed_err(a.t(r), b.t(r)) <= 1e-10);
  }
}

TEST_CASE("Hermitian traces are real and match the real embedding") {
  // H = A + iB maps to the real symmetric [[A, -B], [B, A]], whose traces are twice those of H.
  RngStream rng(23, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    DenseHermitian h{n, std::vector<std::complex<double>>(static_cast<std::size_t>(n * n))};
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const std::complex<double> z(rng.normal(), i == j ? 0.0 : rng.normal());
        h.a[static_cast<std::size_t>(i * n + j)] = z;
        h.a[static_cast<std::size_t>(j * n + i)] = std::conj(z);
      }
    }
    const int m = 2 * n;
    DenseSymmetric e{m, std::vector<double>(static_cast<std::size_t>(m * m))};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const auto z = h(i, j);
        e.a[static_cast<std::size_t>(i * m + j)] = z.real();
        e.a[static_cast<std::size_t>((i + n) * m + j + n)] = z.real();
        e.a[static_cast<std::size_t>(i * m + j + n)] = -z.imag();
        e.a[static_cast<std::size_t>((i + n) * m + j)] = z.imag();
      }
    }
    const auto a = traces_from_matrix(MatrixSample(h), 6);
    const auto b = traces_from_matrix(MatrixSample(e), 6);
    for (int r = 1; r <= 6; ++r) CHECK(mixed_err(2 * a.t(r), b.t(r)) <= 1e-10);
  }
}

TEST_CASE("secular coefficients of known spectra") {
  const auto c12 = newton_coefficients(tr({1, 2}, 2));
  CHECK(c12.c == std::vector<double>{1, -3, 2});
  const auto c3 = newton_coefficients(tr({-1, 0, 1}, 3));
  CHECK(c3.c[0] == 1.0);
  CHECK(c3.c[1] == doctest::Approx(0.0));
  CHECK(c3.c[2] == doctest::Approx(-1.0));
  CHECK(c3.c[3] == doctest::Approx(0.0));
  CHECK(c3.evaluate(2.0) == doctest::Approx(6.0));
  RngStream rng(31, 0);
  for (int i = 0; i < 20; ++i) {
    const auto t = TraceVector(4, {rng.normal(), rng.normal(), rng.normal(), rng.normal()});
    CHECK(newton_coefficients(t).c[1] == -t.t(1));
  }
  CHECK_THROWS_AS(newton_coefficients(TraceVector(3, {1.0, 2.0})), Error);
}

TEST_CASE("Newton recurrence equals the determinant form") {
  RngStream rng(32, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    std::vector<double> t(static_cast<std::size_t>(n));
    for (auto& x : t) x = 6.0 * rng.uniform() - 3.0;
    const auto c = newton_coefficients(TraceVector(n, t));
    for (int k = 1; k <= n; ++k) {
      CHECK(mixed_err(c.c[static_cast<std::size_t>(k)], testing::newton_determinant(t, k)) <= 1e-10);
    }
  }
}

TEST_CASE("secular polynomial annihilates the spectrum") {
  RngStream rng(33, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(10));
    const auto eig = testing::random_eigenvalues(rng, n);
    const auto c = newton_coefficients(traces_from_spectrum(Spectrum(eig), n));
    double sup = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.01) sup = std::max(sup, std::abs(c.evaluate(x)));
    for (double lam : eig) CHECK(std::abs(c.evaluate(lam)) <= 1e-9 * sup);
  }
}

TEST_CASE("extend_traces examples") {
  CHECK(extend_traces(tr({1, 2}, 2), 1).t(3) == doctest::Approx(9.0));
  const auto sym = extend_traces(tr({-1, 1}, 2), 2);
  CHECK(sym.t(3) == doctest::Approx(0.0));
  CHECK(sym.t(4) == doctest::Approx(2.0));
  const auto three = extend_traces(tr({1, 2, 3}, 3), 1);
  CHECK(three.size() == 4);
  CHECK(three.t(4) == doctest::Approx(98.0));
  CHECK(extend_traces(tr({1, 2, 3}, 5), 0).size() == 3);
}

TEST_CASE("extend_traces matches direct power sums") {
  RngStream rng(34, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(10));
    const auto eig = testing::random_eigenvalues(rng, n);
    const auto ext = extend_traces(traces_from_spectrum(Spectrum(eig), n), n);
    const auto want = testing::power_sums(eig, 2 * n);
    for (int r = n + 1; r <= 2 * n; ++r) {
      CHECK(std::abs(ext.t(r) - want[static_cast<std::size_t>(r - 1)]) <= 1e-9 * abs_power_sum(eig, r));
    }
  }
}

TEST_CASE("Hankel matrix examples") {
  const auto h = hankel_matrix(tr({1, 2}, 2));
  CHECK(h.entries == std::vector<double>{2, 3, 3, 5});
  CHECK(h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0) == 1.0);
  const auto hd = hankel_matrix(tr({0.3, 0.3}, 2));
  CHECK(hd(0, 0) * hd(1, 1) - hd(0, 1) * hd(1, 0) == doctest::Approx(0.0));
  const auto h3 = hankel_matrix(tr({-1, 0, 1}, 4));
  std::vector<std::vector<long double>> m(3, std::vector<long double>(3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m[i][j] = h3(i, j);
      CHECK(h3(i, j) == h3(j, i));
    }
  }
  CHECK(static_cast<double>(testing::cofactor_det(m)) == doctest::Approx(4.0));
  CHECK_THROWS_AS(hankel_matrix(tr({1, 2, 3}, 3)), Error);
}

TEST_CASE("discriminant examples") {
  const auto d = discriminant(tr({1, 2, 4}, 3));
  CHECK(d.classification == DomainClass::Interior);
  CHECK(d.log_abs_G == doctest::Approx(std::log(1.0 * 3.0 * 2.0)));
  const auto ext = discriminant(TraceVector(2, {0.0, -1.0}));
  CHECK(ext.classification == DomainClass::Exterior);
  CHECK(std::isinf(ext.log_abs_G));
  CHECK(ext.log_abs_G < 0);
  const auto bd = discriminant(tr({0.5, 0.5, -1.25}, 3));
  CHECK(bd.classification == DomainClass::Boundary);
  CHECK(bd.in_domain());
  CHECK(std::isinf(bd.log_abs_G));
  CHECK(discriminant(TraceVector(1, {0.4})).classification == DomainClass::Interior);
  CHECK(discriminant(tr({2, 2, 2, 2}, 4)).classification == DomainClass::Boundary);
  CHECK(discriminant(tr({1, 1, 2, 2}, 4)).classification == DomainClass::Boundary);
}

TEST_CASE("Gram identity, shift invariance and scaling law") {
  // Ensemble spectra, shifts of the size standardization applies.
  RngStream rng(35, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(9));
    const double beta = trial % 2 == 0 ? 1.0 : 2.0;
    const auto eig = testing::ensemble_spectrum(n, beta, 35, static_cast<std::uint64_t>(trial));
    const auto t = traces_from_spectrum(Spectrum(eig), n);
    const auto d = discriminant(t);
    REQUIRE(d.classification == DomainClass::Interior);
    CHECK(std::abs(2 * d.log_abs_G - 2 * testing::log_vandermonde(eig)) <= 1e-8);

    const double delta = 2.0 * rng.uniform() - 1.0;
    const auto ds = discriminant(shift_traces(t, delta));
    REQUIRE(ds.classification == DomainClass::Interior);
    CHECK(std::abs(ds.log_abs_G - d.log_abs_G) <= 1e-8);

    const double c = std::exp(std::log(0.1) + std::log(100.0) * rng.uniform());
    const auto dc = discriminant(scale_traces(t, c));
    REQUIRE(dc.classification == DomainClass::Interior);
    CHECK(std::abs(dc.log_abs_G - d.log_abs_G - 0.5 * n * (n - 1) * std::log(c)) <= 1e-8);
  }
}

TEST_CASE("discriminant is exact for the double inputs it is given") {
  // A large shift of an ill-conditioned spectrum: the two double vectors
  // differ in log G by ~1e-8 purely from rounding the shifted traces. Both
  // reference values come from an 80-digit evaluation of the Hankel
  // determinant of exactly these inputs.
  const TraceVector t(8, {7.2268382263119495, 20.09532969158737, 22.615517613165093, 84.227558810529771,
                          113.69229661010156, 424.2567095581735, 687.1431704962705, 2358.4575153590627});
  const TraceVector shifted(8, {-26.678491821265354, 102.53467158009219, -452.46931116113035, 2247.03139857218,
                                -12187.643398697504, 70116.422166047094, -418411.13052168983,
                                2551784.5058669182});
  CHECK(std::abs(discriminant(t).log_abs_G - 2.5583540679156219722) <= 1e-13);
  CHECK(std::abs(discriminant(shifted).log_abs_G - 2.5583540787826416987) <= 1e-13);

  const TraceVector u(10, {1.3307776520360175, 37.572038384751046, -8.4397164838921075, 191.32973763535423,
                           -93.386021465350268, 1122.9506066727188, -749.4819037161709, 7081.0768130549177,
                           -5640.6385230867463, 46520.148433310736});
  CHECK(std::abs(discriminant(u).log_abs_G - 22.899443171769488226) <= 1e-13);
}

TEST_CASE("shift and scale examples") {
  const auto t = tr({1, 2}, 2);
  CHECK(shift_traces(t, 0.0) == t);
  CHECK(vals(shift_traces(t, 1.0)) == std::vector<double>{5, 13});
  CHECK(scale_traces(t, 1.0) == t);
  CHECK(vals(scale_traces(t, 2.0)) == std::vector<double>{6, 20});
  CHECK(vals(scale_traces(t, 0.0)) == std::vector<double>{0, 0});
  RngStream rng(36, 0);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const auto eig = testing::random_eigenvalues(rng, n);
    const double delta = 4.0 * rng.uniform() - 2.0;
    const auto shifted = shift_traces(traces_from_spectrum(Spectrum(eig), 6), delta);
    CHECK(shifted.t(1) == doctest::Approx(traces_from_spectrum(Spectrum(eig), 1).t(1) + n * delta));
    std::vector<double> moved = eig;
    for (auto& x : moved) x += delta;
    const auto want = testing::power_sums(moved, 6);
    for (int r = 1; r <= 6; ++r) CHECK(mixed_err(shifted.t(r), want[static_cast<std::size_t>(r - 1)]) <= 1e-10 * std::pow(5.0, r));
  }
}

TEST_CASE("standardize_traces") {
  const auto s = standardize_traces(tr({-1, 1}, 4));
  CHECK(s.delta == 0.0);
  CHECK(s.c == doctest::Approx(std::sqrt(2.0)));
  const auto want = tr({-1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}, 4);
  for (int r = 1; r <= 4; ++r) CHECK(mixed_err(s.t_std.t(r), want.t(r)) <= 1e-14);

  const auto s3 = standardize_traces(tr({0, 1, 2}, 3));
  CHECK(s3.delta == 1.0);
  CHECK(s3.c == doctest::Approx(std::sqrt(2.0)));

  for (double a : {0.0, 1.0, -2.5, 1e3}) {
    try {
      (void)standardize_traces(tr({a, a, a, a}, 4));
      FAIL("expected DegenerateScale");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateScale);
    }
  }

  RngStream rng(37, 0);
  for (int i = 0; i < 300; ++i) {
    const int n = 2 + static_cast<int>(rng.below(9));
    const auto t = traces_from_spectrum(Spectrum(testing::ensemble_spectrum(n, 1.0, 37, static_cast<std::uint64_t>(i))), n);
    const auto st = standardize_traces(t);
    CHECK(std::abs(st.t_std.t(1)) <= 1e-12);
    CHECK(std::abs(st.t_std.t(2) - 1.0) <= 1e-12);
    const double lhs = discriminant(t).log_abs_G;
    const double rhs = 0.5 * n * (n - 1) * std::log(st.c) + discriminant(st.t_std).log_abs_G;
    CHECK(std::abs(lhs - rhs) <= 1e-8);
  }
}

TEST_CASE("indicator is true on spectra and false off the Cauchy-Schwarz cone") {
  RngStream rng(38, 0);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(rng.below(10));
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (auto& x : eig) x = 6.0 * rng.uniform() - 3.0;
    if (rng.uniform() < 0.2 && n > 1) eig[1] = eig[0];
    CHECK(discriminant(traces_from_spectrum(Spectrum(eig), n)).in_domain());

    const double t1 = 6.0 * rng.normal();
    const double t2 = (t1 * t1 / n) * rng.uniform() - rng.uniform();
    std::vector<double> bad{t1, t2};
    for (int r = 3; r <= n; ++r) bad.push_back(rng.normal());
    if (n >= 2) CHECK_FALSE(discriminant(TraceVector(n, bad)).in_domain());
  }
}
