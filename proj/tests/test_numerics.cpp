#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypgraph/numerics.hpp"

#include <cmath>

using namespace hypgraph;

TEST_CASE("dopri5 integrates a known flow") {
  // y' = y, y(0) = 1
  Eigen::Vector2d y{1.0, 0.0};
  integrate_dopri5([](Real, const Eigen::Vector2d& s) { return Eigen::Vector2d(s[0], 0); }, 0.0,
                   1.0, y, 1e-12, 1e-14, [](Real, const Eigen::Vector2d&) {});
  CHECK(y[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
}

TEST_CASE("dopri5 handles reversed time") {
  Eigen::Vector2d y{1.0, 0.0};
  integrate_dopri5([](Real, const Eigen::Vector2d& s) { return Eigen::Vector2d(s[0], 0); }, 1.0,
                   0.0, y, 1e-12, 1e-14, [](Real, const Eigen::Vector2d&) {});
  CHECK(y[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("brent finds a bracketed root") {
  const auto f = [](Real x) { return std::cos(x) - x; };
  const Real r = brent_root(f, 0.0, 1.0, f(0.0), f(1.0), 1e-14);
  CHECK(std::abs(f(r)) < 1e-12);
}

TEST_CASE("hermite interpolation reproduces cubics exactly") {
  const auto f = [](Real x) { return 2 * x * x * x - x * x + 3 * x - 5; };
  const auto df = [](Real x) { return 6 * x * x - 2 * x + 3; };
  const Real x0 = 0.3, x1 = 1.7;
  for (const Real x : {0.4, 0.9, 1.5}) {
    CHECK(hermite_value(x, x0, x1, f(x0), f(x1), df(x0), df(x1)) ==
          doctest::Approx(f(x)).epsilon(1e-13));
    CHECK(hermite_derivative(x, x0, x1, f(x0), f(x1), df(x0), df(x1)) ==
          doctest::Approx(df(x)).epsilon(1e-12));
  }
}

TEST_CASE("line fit recovers slope and intercept") {
  std::vector<Real> x, y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(0.1 * i);
    y.push_back(3.5 - 2.0 * 0.1 * i);
  }
  const LineFit fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("parallel_for writes disjoint slots identically") {
  std::vector<Real> serial(1000), indexed(1000);
  for (int i = 0; i < 1000; ++i) serial[static_cast<std::size_t>(i)] = std::sqrt(i + 1.0);
  parallel_for(1000, [&](int i) { indexed[static_cast<std::size_t>(i)] = std::sqrt(i + 1.0); });
  CHECK(serial == indexed);
}
