#include "hypgraph/model_solution.hpp"

#include "hypgraph/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace hypgraph {

namespace {

// Planar T_L on normalized coordinates.
Vec2 boundary_image(Real L, const Vec2& z) { return boundary_conformal_map(L, z); }

}  // namespace

Real LensModel::image_cone_value(const Vec2& y) const {
  const auto [r, theta] = image_cone.polar(y);
  if (r <= 0 || theta <= 0 || theta >= image_cone.opening) return 0;
  return eval_cone_solution(*cone_table, r, theta);
}

LensModel build_lens_model(const LensDomain& lens,
                           std::shared_ptr<const ConeSolutionTable> table) {
  lens.validate();
  if (!table || table->mu <= 0) throw DomainError("build_lens_model: missing cone table");
  if (std::abs(table->mu - lens.mu) > 1e-12)
    throw DomainError("build_lens_model: cone table opening does not match the lens");
  LensModel model;
  model.lens = lens;
  model.cone_table = std::move(table);
  const Vec2 chord = lens.far_vertex - lens.vertex;
  model.half_chord = 0.5 * chord.norm();
  model.chord_midpoint = 0.5 * (lens.vertex + lens.far_vertex);
  const Vec2 u = chord.normalized();
  model.rotation << u.x(), u.y(), -u.y(), u.x();  // maps u to +x

  const Real L = model.half_chord;
  // Image rays of the two lens arcs: each circle through (+-L, 0) maps to a
  // ray from the origin; sample the arcs to find the directions and validate
  // collinearity and the opening angle.
  const ConvexCornerDomain two_arcs = ConvexCornerDomain::from_lens(lens);
  Vec2 ray[2];
  Real worst_line = 0;
  for (int a = 0; a < 2; ++a) {
    const auto& arc = two_arcs.arcs()[static_cast<std::size_t>(a)];
    // identify which circle this arc belongs to by its center
    const bool is_first = (arc.circle_center() - lens.center1).norm() <
                          (arc.circle_center() - lens.center2).norm();
    const int slot = is_first ? 0 : 1;
    std::vector<Vec2> images;
    for (int k = 1; k < 100; ++k) {
      const Real s = arc.param_start() +
                     (arc.param_end() - arc.param_start()) * k / 100.0;
      const Vec2 z = model.normalize(arc.point(s));
      if ((z - Vec2(L, 0)).norm() < 1e-6 * L) continue;
      images.push_back(boundary_image(L, z));
    }
    // ray direction from the sample farthest from the vertex (best conditioned)
    Vec2 dir{0, 0};
    Real best = -1;
    for (const Vec2& w : images)
      if (w.norm() > best) {
        best = w.norm();
        dir = w.normalized();
      }
    ray[slot] = dir;
    for (const Vec2& w : images) {
      const Real off_line = std::abs(dir.x() * w.y() - dir.y() * w.x());
      worst_line = std::max(worst_line, off_line / (1 + w.norm()));
    }
  }
  model.ray_line_residual = worst_line;
  const Real opening = std::acos(std::clamp(ray[0].dot(ray[1]), -1.0, 1.0));
  model.ray_angle_defect = std::abs(opening - lens.mu * kPi);

  model.image_cone.vertex = Vec2(0, 0);
  model.image_cone.bisector = (ray[0] + ray[1]).normalized();
  model.image_cone.opening = lens.mu * kPi;
  if (model.ray_line_residual > 1e-9)
    throw NumericalError("build_lens_model: mapped arcs are not collinear with their rays");
  if (model.ray_angle_defect > 1e-9)
    throw NumericalError("build_lens_model: image cone opening deviates from mu*pi");
  return model;
}

LensModel build_lens_model(const LensDomain& lens, Real tol) {
  auto table = std::make_shared<ConeSolutionTable>(solve_cone_profile(lens.mu, tol));
  return build_lens_model(lens, std::move(table));
}

Real model_height(const LensModel& model, const Vec2& p, Real tol) {
  if (!model.lens.contains(p)) throw DomainError("model_height: point is not inside the lens");
  const Vec2 z = model.normalize(p);
  const Real L = model.half_chord;

  const auto g = [&](Real t) {
    const HalfSpacePoint image = apply_TL(L, {z.x(), z.y(), t});
    return image.x3 - model.image_cone_value({image.x1, image.x2});
  };

  // The vertical line over p crosses the transported graph exactly once;
  // f <= min_i sqrt(R_i^2 - |p - c_i|^2) <= min(R1, R2) bounds the root.
  const Real g0 = g(0);
  if (g0 >= 0) {
    // p is numerically on the asymptotic boundary
    if (std::abs(g0) < tol) return 0;
    throw NumericalError("model_height: no bracket at the boundary plane");
  }
  Real hi = 2 * std::min(model.lens.radius1, model.lens.radius2);
  Real ghi = g(hi);
  int guard = 0;
  while (ghi <= 0 && guard++ < 8) {
    hi *= 2;
    ghi = g(hi);
  }
  if (ghi <= 0) throw NumericalError("model_height: no sign change in the bracket");
  const Real t = brent_root(g, 0, hi, g0, ghi, tol);
  return t;
}

Real model_height_from_distances(const LensModel& model, Real d1, Real d2, Real tol) {
  if (d1 < 0 || d2 < 0)
    throw DomainError("model_height_from_distances: distances must be nonnegative");
  if (d1 == 0 || d2 == 0) return 0;  // asymptotic boundary
  const Vec2 p = point_from_distances(model.lens, d1, d2);
  return model_height(model, p, tol);
}

}  // namespace hypgraph
