#pragma once

// The half-space isometry T_L and its boundary action. T_L fixes the
// upper half-space model of H^3, swaps the planar points (-L, 0) and the
// origin-side ray structure, and sends (L, 0) to infinity; restricted to
// the boundary plane it is the Mobius map z -> L(L+z)/(L-z).

#include "hypgraph/types.hpp"

namespace hypgraph {

/// Point of the upper half-space model; z() >= 0, z() == 0 on the
/// asymptotic boundary.
struct HalfSpacePoint {
  Real x1 = 0, x2 = 0, x3 = 0;

  Vec3 vec() const { return {x1, x2, x3}; }
  static HalfSpacePoint from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

/// Distance from p to the pole (L, 0, 0) below which apply_TL refuses to
/// evaluate (catastrophic cancellation).
constexpr Real kPoleGuard = 1e-8;

HalfSpacePoint apply_TL(Real L, const HalfSpacePoint& p);

/// Closed-form inverse: T_L conjugated by the reflection x1 -> -x1.
HalfSpacePoint apply_TL_inverse(Real L, const HalfSpacePoint& p);

/// Deviation |T_L p - (G3 G2 G1 G4 G3 G2 G1) p| between the closed form and
/// the seven-map composition.
Real factorization_check(Real L, const HalfSpacePoint& p);

/// Restriction of T_L to the boundary plane {x3 = 0}.
Vec2 boundary_conformal_map(Real L, const Vec2& q);

/// Hyperbolic distance in the upper half-space model (heights must be > 0).
Real hyperbolic_distance(const HalfSpacePoint& p, const HalfSpacePoint& q);

}  // namespace hypgraph
