#include "hypgraph/isometry.hpp"

#include <cmath>

namespace hypgraph {

namespace {

void check_pole(Real L, const HalfSpacePoint& p) {
  if (L <= 0) throw DomainError("apply_TL: L must be positive");
  const Real d2 = (p.x1 - L) * (p.x1 - L) + p.x2 * p.x2 + p.x3 * p.x3;
  if (d2 < kPoleGuard * kPoleGuard * (1 + L * L))
    throw DomainError("apply_TL: input is at the pole (L, 0, 0); image is at infinity");
}

}  // namespace

HalfSpacePoint apply_TL(Real L, const HalfSpacePoint& p) {
  check_pole(L, p);
  const Real den = (p.x1 - L) * (p.x1 - L) + p.x2 * p.x2 + p.x3 * p.x3;
  const Real n2 = p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3;
  return {L * (L * L - n2) / den, 2 * L * L * p.x2 / den, 2 * L * L * p.x3 / den};
}

HalfSpacePoint apply_TL_inverse(Real L, const HalfSpacePoint& p) {
  if (L <= 0) throw DomainError("apply_TL_inverse: L must be positive");
  const Real den = (p.x1 + L) * (p.x1 + L) + p.x2 * p.x2 + p.x3 * p.x3;
  if (den < kPoleGuard * kPoleGuard * (1 + L * L))
    throw DomainError("apply_TL_inverse: input is the image of infinity");
  const Real n2 = p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3;
  return {L * (n2 - L * L) / den, 2 * L * L * p.x2 / den, 2 * L * L * p.x3 / den};
}

Real factorization_check(Real L, const HalfSpacePoint& p) {
  check_pole(L, p);
  const auto g1 = [L](Vec3 v) { return Vec3{v.x(), v.y(), v.z() + L}; };
  const auto g2 = [L](const Vec3& v) -> Vec3 { return (2 * L * L / v.squaredNorm()) * v; };
  const auto g3 = [L](Vec3 v) { return Vec3{v.x(), v.y(), v.z() - L}; };
  const auto g4 = [](const Vec3& v) { return Vec3{v.z(), v.y(), -v.x()}; };
  Vec3 q = g3(g2(g1(g4(g3(g2(g1(p.vec())))))));
  return (apply_TL(L, p).vec() - q).norm();
}

Vec2 boundary_conformal_map(Real L, const Vec2& q) {
  const HalfSpacePoint image = apply_TL(L, {q.x(), q.y(), 0});
  return {image.x1, image.x2};
}

Real hyperbolic_distance(const HalfSpacePoint& p, const HalfSpacePoint& q) {
  if (p.x3 <= 0 || q.x3 <= 0)
    throw DomainError("hyperbolic_distance: points must have positive height");
  const Real d2 = (p.vec() - q.vec()).squaredNorm();
  return std::acosh(1 + d2 / (2 * p.x3 * q.x3));
}

}  // namespace hypgraph
