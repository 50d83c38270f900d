#pragma once

// The corner model solution on a lens domain, evaluated by transporting the
// cone graph through the half-space isometry T_L. The lens is rigidly moved
// so its vertices sit at (-L, 0) and (L, 0) with L half the chord; T_L then
// maps the lens conformally onto an infinite cone of the same opening, and
// the graph over the lens onto the self-similar cone graph r h(theta).

#include "hypgraph/cone_solver.hpp"
#include "hypgraph/geometry.hpp"
#include "hypgraph/isometry.hpp"
#include "hypgraph/types.hpp"

#include <memory>

namespace hypgraph {

struct LensModel {
  LensDomain lens;
  Real half_chord = 0;  // L
  // rigid normalization p -> rot * (p - chord_midpoint), vertex -> (-L, 0)
  Eigen::Matrix2d rotation;
  Vec2 chord_midpoint{0, 0};
  ConeDomain image_cone;  // vertex at the origin
  std::shared_ptr<const ConeSolutionTable> cone_table;
  Real ray_angle_defect = 0;   // |angle(e1, e2) - mu*pi|
  Real ray_line_residual = 0;  // max distance of mapped arc samples to their rays

  Vec2 normalize(const Vec2& p) const { return rotation * (p - chord_midpoint); }
  /// Value of the transported cone graph over the normalized plane (0 outside
  /// the image cone).
  Real image_cone_value(const Vec2& y) const;
};

LensModel build_lens_model(const LensDomain& lens, Real tol = 1e-10);
LensModel build_lens_model(const LensDomain& lens, std::shared_ptr<const ConeSolutionTable> table);

/// Height of the model graph over p (strictly inside the lens): the unique
/// t > 0 with T_L(p, t) on the cone graph.
Real model_height(const LensModel& model, const Vec2& p, Real tol = 1e-12);

/// Same, with the point specified by its distances to the two circles.
Real model_height_from_distances(const LensModel& model, Real d1, Real d2, Real tol = 1e-12);

}  // namespace hypgraph
