#pragma once

// Small numerical building blocks shared across modules: an adaptive
// Dormand-Prince 5(4) integrator, bracketed scalar root finding, cubic
// Hermite interpolation on nonuniform grids, and least-squares line fits.

#include "hypgraph/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace hypgraph {

/// Integrate y' = f(t, y) from t0 to t1 (t1 may be < t0) with adaptive
/// Dormand-Prince 5(4) steps. Calls observe(t, y) after every accepted step
/// (and once at t0). `stop` may end integration early; the state is left at
/// the last accepted step.
template <typename State, typename Rhs, typename Observer>
void integrate_dopri5(const Rhs& f, Real t0, Real t1, State& y, Real rel_tol, Real abs_tol,
                      const Observer& observe,
                      const std::function<bool(Real, const State&)>& stop = {}) {
  static const Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const Real a21 = 1.0 / 5;
  static const Real a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const Real a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const Real a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                    a54 = -212.0 / 729;
  static const Real a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                    a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const Real b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                    b6 = 11.0 / 84;
  // embedded 4th-order weights
  static const Real e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                    e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

  const Real dir = (t1 >= t0) ? 1.0 : -1.0;
  Real t = t0;
  Real span = std::abs(t1 - t0);
  Real dt = dir * std::min(span / 16.0, std::max(1e-300, span * 1e-3));
  observe(t, y);
  State k1 = f(t, y);
  int rejects_in_row = 0;
  while (dir * (t1 - t) > 0) {
    if (dir * (t + dt - t1) > 0) dt = t1 - t;
    State k2 = f(t + c2 * dt, State(y + dt * (a21 * k1)));
    State k3 = f(t + c3 * dt, State(y + dt * (a31 * k1 + a32 * k2)));
    State k4 = f(t + c4 * dt, State(y + dt * (a41 * k1 + a42 * k2 + a43 * k3)));
    State k5 = f(t + c5 * dt, State(y + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    State k6 = f(t + dt, State(y + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    State y5 = y + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State k7 = f(t + dt, y5);
    State y4 = y + dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    Real err = 0, scale_norm = 0;
    for (int i = 0; i < y.size(); ++i) {
      Real sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      Real e = std::abs(y5[i] - y4[i]) / sc;
      err = std::max(err, e);
      scale_norm = std::max(scale_norm, sc);
    }
    (void)scale_norm;
    if (err <= 1.0 || std::abs(dt) <= std::abs(t) * 1e-15 + 1e-300) {
      t += dt;
      y = y5;
      k1 = k7;  // FSAL
      observe(t, y);
      if (stop && stop(t, y)) return;
      rejects_in_row = 0;
    } else {
      ++rejects_in_row;
      if (rejects_in_row > 60) return;  // step size underflow; caller checks t
    }
    Real fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    dt *= std::clamp(fac, 0.2, 5.0);
  }
}

/// Brent's method on a bracketing interval [a, b] with fa * fb <= 0.
Real brent_root(const std::function<Real(Real)>& f, Real a, Real b, Real fa, Real fb,
                Real xtol, int max_iter = 200);

/// Cubic Hermite value on [x0, x1] given endpoint values and derivatives.
inline Real hermite_value(Real x, Real x0, Real x1, Real y0, Real y1, Real d0, Real d1) {
  const Real h = x1 - x0, s = (x - x0) / h;
  const Real s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * d1;
}

/// Derivative of the cubic Hermite above.
inline Real hermite_derivative(Real x, Real x0, Real x1, Real y0, Real y1, Real d0, Real d1) {
  const Real h = x1 - x0, s = (x - x0) / h;
  return ((6 * s * s - 6 * s) * (y0 - y1) / h) + (3 * s * s - 4 * s + 1) * d0 +
         (3 * s * s - 2 * s) * d1;
}

/// Ordinary least squares y ~ a + b x; returns {a, b, rms residual}.
struct LineFit {
  Real intercept = 0;
  Real slope = 0;
  Real rms_residual = 0;
};
LineFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y);

/// Least squares fit of y against arbitrary basis columns; returns coefficients.
VecX fit_least_squares(const std::vector<VecX>& columns, const VecX& rhs);

/// Locate the interval index i with grid[i] <= x <= grid[i+1] (grid ascending).
std::size_t locate_interval(const std::vector<Real>& grid, Real x);

/// Worker count: HYPGRAPH_THREADS caps it; defaults to 1.
int worker_count();

/// Runs fn(i) for i in [0, n). Results must be written to disjoint slots;
/// there is no reduction, so the output is identical for any worker count.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace hypgraph
