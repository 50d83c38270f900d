#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypgraph/cone_solver.hpp"
#include "hypgraph/numerics.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace hypgraph;

// Golden value from the independent collocation oracle (damped Newton on 1e5
// graded nodes, extrapolated H'(0)); see oracles.cpp.
static constexpr Real kGoldenAHalf = 0.245427;

TEST_CASE("profile solve satisfies its invariants (mu = 0.5)") {
  const auto t = solve_cone_profile(0.5, 1e-8);
  CHECK(t.residual < 1e-8);
  CHECK(t.raw_residual < 1e-8);
  CHECK(t.symmetry_defect < 1e-8);
  for (std::size_t i = 0; i < t.theta.size(); ++i) {
    CHECK(t.h[i] > 0);
    // h'' + h < 0 with h'' evaluated from the equation
    CHECK(t.h_second(i) + t.h[i] < 0);
  }
  // h -> 0 at both endpoints
  CHECK(t.h.front() < 1e-2);
  CHECK(t.h.back() < 1e-2);
}

TEST_CASE("mu outside (0,1) is rejected") {
  CHECK_THROWS_AS(solve_cone_profile(0.0, 1e-8), DomainError);
  CHECK_THROWS_AS(solve_cone_profile(1.0, 1e-8), DomainError);
  CHECK_THROWS_AS(solve_cone_profile(-0.2, 1e-8), DomainError);
}

TEST_CASE("eval symmetry is exact and matches the table") {
  const auto t = solve_cone_profile(0.37, 1e-8);
  const Real full = t.mu * kPi;
  for (const Real frac : {0.001, 0.01, 0.1, 0.3, 0.49}) {
    const Real theta = frac * full;
    // reflection of the argument rounds by one ulp of full, amplified by h'
    CHECK(eval_profile(t, theta) ==
          doctest::Approx(eval_profile(t, full - theta)).epsilon(1e-12));
    CHECK(eval_profile_derivative(t, theta) ==
          doctest::Approx(-eval_profile_derivative(t, full - theta)).epsilon(1e-12));
  }
  // midpoint lookup returns the shooting value
  CHECK(eval_profile(t, 0.5 * full) == doctest::Approx(t.midpoint_value).epsilon(1e-12));
  CHECK(eval_profile_derivative(t, 0.5 * full) == doctest::Approx(0.0));
}

TEST_CASE("supersolution bound h <= sqrt(3 mu) sin(theta/mu)^{1/3} for small mu") {
  for (const Real mu : {0.2, 1.0 / 3.0}) {
    const auto t = solve_cone_profile(mu, 1e-8);
    const Real amp = std::sqrt(3 * mu);
    for (std::size_t i = 0; i < t.theta.size(); ++i) {
      const Real bound = amp * std::cbrt(std::sin(t.theta[i] / mu));
      CHECK(t.h[i] <= bound + 1e-9);
    }
  }
}

TEST_CASE("a_mu against the frozen collocation golden value") {
  const auto t = solve_cone_profile(0.5, 1e-8);
  CHECK(std::abs(a_mu(t) - kGoldenAHalf) < 2e-3 * kGoldenAHalf);
}

TEST_CASE("a_mu against a live collocation oracle run") {
  const auto t = solve_cone_profile(0.5, 1e-8);
  const auto oracle = oracle::collocation_cone_solve(0.5, 100001);
  CHECK(std::abs(oracle.a_mu - kGoldenAHalf) < 1e-3 * kGoldenAHalf);
  CHECK(std::abs(t.a_mu - oracle.a_mu) < 1e-3 * oracle.a_mu);
  CHECK(std::abs(t.midpoint_value - oracle.midpoint_value) < 1e-6);
}

TEST_CASE("a_mu is positive and stable under grid refinement") {
  for (const Real mu : {0.25, 0.6}) {
    const auto coarse = solve_cone_profile(mu, 1e-8, 2000);
    const auto fine = solve_cone_profile(mu, 1e-8, 4000);
    CHECK(coarse.a_mu > 0);
    CHECK(fine.a_mu > 0);
    CHECK(std::abs(coarse.a_mu - fine.a_mu) < 1e-3 * fine.a_mu);
  }
}

TEST_CASE("eval scaling in r is exact") {
  const auto t = solve_cone_profile(0.45, 1e-8);
  const Real theta = 0.2 * t.mu * kPi;
  const Real base = eval_cone_solution(t, 1.0, theta);
  CHECK(eval_cone_solution(t, 3.5, theta) == 3.5 * base);
  CHECK(eval_cone_solution(t, 0.125, theta) == 0.125 * base);
}

TEST_CASE("endpoint asymptotics: h ~ a^{-1/3} theta^{1/3}, 3 theta^{2/3} h' -> a^{-1/3}") {
  const auto t = solve_cone_profile(0.5, 1e-8);
  const Real amp = 1 / std::cbrt(t.a_mu);
  Real prev_dev = 1;
  for (const Real theta : {1e-4, 1e-5, 1e-6}) {
    const Real dev = std::abs(eval_profile(t, theta) / std::cbrt(theta) - amp) / amp;
    CHECK(dev < prev_dev + 1e-12);
    prev_dev = dev;
  }
  CHECK(prev_dev < 1e-3);
  for (const Real theta : {1e-5, 1e-6}) {
    const Real lhs = 3 * std::pow(theta, 2.0 / 3.0) * eval_profile_derivative(t, theta);
    CHECK(lhs == doctest::Approx(amp).epsilon(1e-2));
  }
  // derivative matches the asymptotic form to 10% deep in the endpoint window
  const Real theta_deep = 0.003 * t.mu * kPi / 3;
  const Real asym = amp / 3 * std::pow(theta_deep, -2.0 / 3.0);
  CHECK(eval_profile_derivative(t, theta_deep) == doctest::Approx(asym).epsilon(0.1));
}

TEST_CASE("out-of-range evaluation throws") {
  const auto t = solve_cone_profile(0.5, 1e-8);
  CHECK_THROWS_AS(eval_profile(t, 0.0), DomainError);
  CHECK_THROWS_AS(eval_profile(t, t.mu * kPi), DomainError);
  CHECK_THROWS_AS(eval_cone_solution(t, -1.0, 0.3), DomainError);
  CHECK_THROWS_AS(eval_profile_derivative(t, -0.1), DomainError);
}

TEST_CASE("a_mu consistency guard trips on a corrupted table") {
  auto t = solve_cone_profile(0.5, 1e-8);
  t.a_mu_slope_fit = t.a_mu * 1.02;
  CHECK_THROWS_AS(a_mu(t), NumericalError);
}
