#include "gbe/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "gbe/special.hpp"

namespace gbe {

namespace {

// Kronrod abscissae; the odd-indexed ones (and the centre) are the Gauss points.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * sum;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts) {
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<Segment> heap;
  heap.push(gauss_kronrod(f, a, b));
  out.evaluations = 15;
  double total = heap.top().value;
  double error = heap.top().error;
  int subdivisions = 1;
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (subdivisions >= opts.max_subdivisions) {
      throw Error(ErrorCode::NoConvergence,
                  "adaptive quadrature: error estimate " + std::to_string(error) +
                      " after " + std::to_string(subdivisions) + " subdivisions");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-add from the pieces so the running update does not leak round-off.
  CompensatedSum value;
  CompensatedSum err;
  while (!heap.empty()) {
    value.add(heap.top().value);
    err.add(heap.top().error);
    heap.pop();
  }
  out.value = value.value();
  out.err_est = err.value();
  return out;
}

ParabolicRegion ParabolicRegion::covering(const EnsembleParams& params, double tail) {
  require_joint_exponent(params);
  const double n = params.n_dim();
  const double beta = params.beta();
  const double sigma = std::sqrt(n / beta);
  double z = 1.0;
  while (2.0 * normal_cdf(-z, 1.0) > tail) z += 0.25;
  const double shape = params.exponent_p() + 1.0;
  double x = shape;
  const double step = std::sqrt(shape) + 1.0;
  while (regularized_gamma_q(shape, x) > tail) x += step;
  return {params.n_dim(), z * sigma, x * 2.0 / beta};
}

QuadratureResult quadrature_2d(const EnsembleParams& params,
                               const std::function<double(const JointPoint&)>& integrand,
                               const ParabolicRegion& region, const QuadratureOptions& opts) {
  if (region.n_dim != params.n_dim()) {
    throw Error(ErrorCode::InvalidArgument, "region built for a different N");
  }
  const double n = params.n_dim();
  QuadratureOptions inner_opts = opts;
  inner_opts.rel_tol = 0.1 * opts.rel_tol;
  inner_opts.abs_tol = 0.0;
  double worst_inner_rel = 0.0;
  int evaluations = 0;
  auto inner = [&](double v) {
    const double base = v * v / n;
    const auto r = integrate_adaptive(
        [&](double u) { return integrand(JointPoint{v, u + base, u}); }, 0.0, region.u_max,
        inner_opts);
    evaluations += r.evaluations;
    if (r.value != 0.0) worst_inner_rel = std::max(worst_inner_rel, r.err_est / std::abs(r.value));
    return r.value;
  };
  QuadratureResult out = integrate_adaptive(inner, -region.v_half_width, region.v_half_width, opts);
  out.err_est += worst_inner_rel * std::abs(out.value);
  out.evaluations = evaluations;
  return out;
}

}  // namespace gbe
