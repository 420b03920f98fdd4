#pragma once

#include <functional>

#include "gbe/core.hpp"

namespace gbe {

struct QuadratureResult {
  double value = 0.0;
  /// Sum over subintervals of |K15 - G7|.
  double err_est = 0.0;
  int evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Endpoints are never
/// evaluated, so integrable endpoint singularities are fine. Throws
/// NoConvergence if the tolerance is not met within max_subdivisions.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts = {});

/// Integration window above the parabola t2 = t1^2 / N, in the coordinates
/// v = t1 in [-v_half_width, v_half_width], u = t2 - t1^2/N in [0, u_max].
struct ParabolicRegion {
  int n_dim = 1;
  double v_half_width = 0.0;
  double u_max = 0.0;

  /// Window whose Gaussian (v) and Gamma (u) tails both fall below `tail`
  /// for the joint (t1, t2) law of these params.
  static ParabolicRegion covering(const EnsembleParams& params, double tail = 1e-13);
};

/// A quadrature node in both coordinate systems. `u` is exact, whereas
/// recomputing t2 - t1^2/N from (t1, t2) cancels badly next to the parabola.
struct JointPoint {
  double t1 = 0.0;
  double t2 = 0.0;
  double u = 0.0;
};

/// Integral of the integrand over the region, computed as nested adaptive
/// Gauss-Kronrod in (v, u) with t1 = v, t2 = u + v^2/N (unit Jacobian), so the
/// inner integral always starts at the parabola.
QuadratureResult quadrature_2d(const EnsembleParams& params,
                               const std::function<double(const JointPoint&)>& integrand,
                               const ParabolicRegion& region, const QuadratureOptions& opts = {});

}  // namespace gbe
