#include "hypgraph/numerics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace hypgraph {

Real brent_root(const std::function<Real(Real)>& f, Real a, Real b, Real fa, Real fb, Real xtol,
                int max_iter) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) throw NumericalError("brent_root: endpoints do not bracket a root");
  Real c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const Real tol1 = 2 * std::numeric_limits<Real>::epsilon() * std::abs(b) + 0.5 * xtol;
    const Real xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      Real p, q, r, s = fb / fa;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2 * p < std::min(3 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

LineFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("fit_line: need at least two matching samples");
  const auto n = static_cast<Real>(x.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
  }
  const Real det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) throw NumericalError("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  Real ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Real r = y[i] - fit.intercept - fit.slope * x[i];
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

VecX fit_least_squares(const std::vector<VecX>& columns, const VecX& rhs) {
  if (columns.empty()) throw DomainError("fit_least_squares: no basis columns");
  Eigen::MatrixXd a(rhs.size(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = columns[j];
  return a.colPivHouseholderQr().solve(rhs);
}

std::size_t locate_interval(const std::vector<Real>& grid, Real x) {
  if (grid.size() < 2) throw DomainError("locate_interval: grid too small");
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t i = (it == grid.begin()) ? 0 : static_cast<std::size_t>(it - grid.begin() - 1);
  return std::min(i, grid.size() - 2);
}

int worker_count() {
  static const int count = [] {
    const char* env = std::getenv("HYPGRAPH_THREADS");
    if (!env) return 1;
    const int requested = std::atoi(env);
    if (requested < 1) return 1;
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    return std::min(requested, std::max(hw, 1));
  }();
  return count;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::atomic<int> next{0};
  constexpr int kChunk = 256;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int start = next.fetch_add(kChunk);
        if (start >= n) return;
        const int end = std::min(start + kChunk, n);
        for (int i = start; i < end; ++i) fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hypgraph
