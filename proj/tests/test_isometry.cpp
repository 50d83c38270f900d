#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypgraph/isometry.hpp"

#include <cmath>
#include <random>

using namespace hypgraph;

namespace {

std::mt19937& rng() {
  static std::mt19937 gen(12345);
  return gen;
}

HalfSpacePoint random_point(Real scale = 2.0, Real min_height = 0.0) {
  std::uniform_real_distribution<Real> dist(-scale, scale);
  return {dist(rng()), dist(rng()), std::abs(dist(rng())) + min_height};
}

}  // namespace

TEST_CASE("T_L on the distinguished boundary points") {
  const Real L = 1.7;
  const auto a = apply_TL(L, {-L, 0, 0});
  CHECK(a.vec().norm() < 1e-14);  // lens vertex goes to the cone vertex
  const auto b = apply_TL(L, {0, 0, 0});
  CHECK(b.x1 == doctest::Approx(L));
  CHECK(std::abs(b.x2) < 1e-14);
  CHECK(std::abs(b.x3) < 1e-14);
}

TEST_CASE("T_1 fixes (0, 0, 1)") {
  const auto p = apply_TL(1.0, {0, 0, 1});
  CHECK(p.x1 == doctest::Approx(0.0));
  CHECK(p.x2 == doctest::Approx(0.0));
  CHECK(p.x3 == doctest::Approx(1.0));
}

TEST_CASE("pole input is rejected") {
  CHECK_THROWS_AS(apply_TL(1.0, {1, 0, 0}), DomainError);
  CHECK_THROWS_AS(apply_TL(2.0, {2, 1e-10, 0}), DomainError);
}

TEST_CASE("inverse of the distinguished points") {
  const Real L = 0.8;
  const auto a = apply_TL_inverse(L, {0, 0, 0});
  CHECK(a.x1 == doctest::Approx(-L));
  CHECK(std::abs(a.x2) < 1e-14);
  const auto b = apply_TL_inverse(L, {L, 0, 0});
  CHECK(b.vec().norm() < 1e-14);
}

TEST_CASE("round trip apply_TL o apply_TL_inverse is the identity") {
  for (int k = 0; k < 200; ++k) {
    const Real L = 0.3 + 0.01 * k;
    const auto p = random_point(2.0, 1e-3);
    const auto q = apply_TL(L, apply_TL_inverse(L, p));
    CHECK((q.vec() - p.vec()).norm() < 1e-12 * (1 + p.vec().norm()));
    const auto r = apply_TL_inverse(L, apply_TL(L, p));
    CHECK((r.vec() - p.vec()).norm() < 1e-12 * (1 + p.vec().norm()));
  }
}

TEST_CASE("factorization into G3 G2 G1 G4 G3 G2 G1") {
  CHECK(factorization_check(2.0, {0, 0, 0}) < 1e-15);
  Real worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto p = random_point();
    worst = std::max(worst, factorization_check(1.0, p) / (1 + p.vec().norm()));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("factorization near the pole") {
  // distance 1e-6 from the pole: relative agreement still at the 1e-6 scale
  const Real L = 1.0;
  const HalfSpacePoint p{L + 1e-6, 0, 1e-6};
  const Real dev = factorization_check(L, p);
  const Real scale = apply_TL(L, p).vec().norm();
  CHECK(dev / (1 + scale) < 1e-6);
}

TEST_CASE("hyperbolic distance is preserved") {
  for (int k = 0; k < 100; ++k) {
    const Real L = 0.4 + 0.02 * k;
    const auto p = random_point(1.5, 0.1);
    const auto q = random_point(1.5, 0.1);
    const Real before = hyperbolic_distance(p, q);
    const Real after = hyperbolic_distance(apply_TL(L, p), apply_TL(L, q));
    CHECK(std::abs(after - before) < 1e-9 * (1 + before));
  }
}

TEST_CASE("height positivity and decay at infinity") {
  for (int k = 0; k < 100; ++k) {
    const auto p = random_point(3.0, 1e-6);
    CHECK(apply_TL(1.0, p).x3 > 0);
  }
  // along height 1, the image height vanishes as |p| grows
  Real prev = 1;
  for (const Real r : {10.0, 100.0, 1000.0}) {
    const Real height = apply_TL(1.0, {r, r, 1.0}).x3;
    CHECK(height < prev);
    prev = height;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("pullback metric is conformal with ratio of heights") {
  std::uniform_real_distribution<Real> dist(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Real L = 1.3;
    const HalfSpacePoint p{dist(rng()), dist(rng()), 0.5 + std::abs(dist(rng()))};
    const Real eps = 1e-6;
    Eigen::Matrix3d jac;
    for (int c = 0; c < 3; ++c) {
      Vec3 dp = Vec3::Zero();
      dp[c] = eps;
      const Vec3 plus = apply_TL(L, HalfSpacePoint::from(p.vec() + dp)).vec();
      const Vec3 minus = apply_TL(L, HalfSpacePoint::from(p.vec() - dp)).vec();
      jac.col(c) = (plus - minus) / (2 * eps);
    }
    const Real ratio = apply_TL(L, p).x3 / p.x3;
    const Eigen::Matrix3d gram = jac.transpose() * jac / (ratio * ratio);
    CHECK((gram - Eigen::Matrix3d::Identity()).norm() < 1e-6);
  }
}

TEST_CASE("boundary map sends circles through (+-L, 0) to rays") {
  const Real L = 0.9;
  // circle through both (-L, 0) and (L, 0): center (0, y0)
  const Real y0 = 0.45;
  const Real radius = std::sqrt(L * L + y0 * y0);
  const Vec2 center(0, y0);
  CHECK(boundary_conformal_map(L, Vec2(-L, 0)).norm() < 1e-14);

  Vec2 dir(0, 0);
  Real best = -1;
  std::vector<Vec2> images;
  for (int k = 1; k < 100; ++k) {
    const Real base = std::atan2(-y0, -L - 0);  // angle of (-L,0) seen from center
    const Real ang = base + 0.02 * k;
    const Vec2 z = center + radius * Vec2(std::cos(ang), std::sin(ang));
    if ((z - Vec2(L, 0)).norm() < 1e-3) continue;
    const Vec2 w = boundary_conformal_map(L, z);
    images.push_back(w);
    if (w.norm() > best) {
      best = w.norm();
      dir = w.normalized();
    }
  }
  for (const Vec2& w : images)
    CHECK(std::abs(dir.x() * w.y() - dir.y() * w.x()) < 1e-9 * (1 + w.norm()));
}

TEST_CASE("boundary map is conformal at (-L, 0)") {
  // two circles through (+-L, 0) meet at the same angle as their image rays
  const Real L = 1.1;
  const auto ray_direction = [&](Real y0) {
    const Real radius = std::sqrt(L * L + y0 * y0);
    const Vec2 center(0, y0);
    Vec2 dir(0, 0);
    Real best = -1;
    const Real base = std::atan2(-y0, -L);
    for (int k = 1; k < 60; ++k) {
      const Vec2 z = center + radius * Vec2(std::cos(base + 0.01 * k), std::sin(base + 0.01 * k));
      const Vec2 w = boundary_conformal_map(L, z);
      if (w.norm() > best) {
        best = w.norm();
        dir = w.normalized();
      }
    }
    return dir;
  };
  const auto tangent_at_vertex = [&](Real y0) {
    // tangent of the circle at (-L, 0), oriented toward the sampled side
    const Vec2 radial = (Vec2(-L, 0) - Vec2(0, y0)).normalized();
    return Vec2(-radial.y(), radial.x());
  };
  const Vec2 r1 = ray_direction(0.7), r2 = ray_direction(-0.4);
  const Vec2 t1 = tangent_at_vertex(0.7), t2 = tangent_at_vertex(-0.4);
  const Real image_angle = std::acos(std::clamp(r1.dot(r2), -1.0, 1.0));
  const Real source_angle = std::acos(std::clamp(t1.dot(t2), -1.0, 1.0));
  CHECK(image_angle == doctest::Approx(source_angle).epsilon(1e-7));
}
