#pragma once

// Planar domain geometry: oriented boundary arcs, signed distances,
// curvature, corners with tangent cones, and the two-disk lens domains
// together with the distance-matching corner chart.
//
// Orientation convention: every arc is parametrized with the domain on the
// LEFT of the direction of increasing parameter, so the inner normal is the
// tangent rotated by +pi/2. A circle arc with the domain inside is swept
// counterclockwise.

#include "hypgraph/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hypgraph {

enum class ArcKind { CircleArc, EllipseArc, AnalyticArc };

class BoundaryArc {
public:
  static BoundaryArc circle(const Vec2& center, Real radius, Real angle_start, Real angle_end);
  /// Ellipse with semi-axes (a, b), rotated by `rotation`, parameter range
  /// [s0, s1] in the usual trigonometric sense.
  static BoundaryArc ellipse(const Vec2& center, Real semi_a, Real semi_b, Real rotation, Real s0,
                             Real s1);
  static BoundaryArc analytic(std::function<Vec2(Real)> gamma, std::function<Vec2(Real)> dgamma,
                              std::function<Vec2(Real)> ddgamma, Real s0, Real s1);

  ArcKind kind() const { return kind_; }
  Real param_start() const { return s0_; }
  Real param_end() const { return s1_; }

  Vec2 point(Real s) const { return gamma_(s); }
  Vec2 tangent(Real s) const;
  Vec2 inner_normal(Real s) const;
  Vec2 start_point() const { return gamma_(s0_); }
  Vec2 end_point() const { return gamma_(s1_); }

  /// Circle-arc accessors (throw for other kinds).
  const Vec2& circle_center() const;
  Real circle_radius() const;
  Real circle_angle_start() const;
  Real circle_angle_end() const;

  /// Ellipse accessors (throw for other kinds).
  Vec2 ellipse_center() const;
  Real ellipse_semi_a() const;
  Real ellipse_semi_b() const;
  Real ellipse_rotation() const;

  /// Parameter of the closest point on the supporting curve, found from 64
  /// grid seeds refined by safeguarded Newton. The search interval extends
  /// slightly beyond [s0, s1] so feet near an endpoint stay well defined.
  Real foot_parameter(const Vec2& p) const;

  /// Signed distance to the supporting curve: positive on the domain side.
  Real signed_distance(const Vec2& p) const;

  /// Unsigned distance to the arc as a compact set (feet clamped to the
  /// parameter range); also reports the clamped foot parameter.
  Real distance_to_arc(const Vec2& p, Real* foot_param = nullptr) const;

  Real curvature(Real s) const;
  Real max_curvature_sample() const { return max_curvature_; }

private:
  BoundaryArc() = default;

  ArcKind kind_ = ArcKind::AnalyticArc;
  std::function<Vec2(Real)> gamma_, dgamma_, ddgamma_;
  Real s0_ = 0, s1_ = 0;
  Real search_pad_ = 0;
  Real max_curvature_ = 0;
  bool closed_ = false;  // start and end coincide; parameters wrap

  Vec2 center_{0, 0};
  Real radius_ = 0;
  Real semi_a_ = 0, semi_b_ = 0, rotation_ = 0;
};

struct CornerData {
  Vec2 vertex{0, 0};
  Real mu = 0;          // opening angle is mu * pi
  Vec2 nu1{0, 0};       // unit inner normal of sigma_1 at the vertex
  Vec2 nu2{0, 0};
  Real kappa1 = 0;      // curvatures of sigma_i at the vertex, > 0
  Real kappa2 = 0;

  Real radius1() const { return 1.0 / kappa1; }
  Real radius2() const { return 1.0 / kappa2; }
  void validate(Real tol = 1e-8) const;
};

/// Infinite planar cone with vertex, bisector direction, and opening angle.
/// Polar angles are measured counterclockwise from the first edge, so the
/// cone is {0 < theta < opening}.
struct ConeDomain {
  Vec2 vertex{0, 0};
  Vec2 bisector{1, 0};
  Real opening = 0;  // = mu * pi, in (0, pi)

  Real mu() const { return opening / kPi; }
  Vec2 edge_direction(int i) const;  // i = 0 (theta = 0 edge) or 1
  bool contains(const Vec2& p) const;
  /// (r, theta) of p relative to the vertex and first edge.
  std::pair<Real, Real> polar(const Vec2& p) const;
  void validate() const;
};

/// The model domain: intersection of the two disks tangent to the boundary
/// curves at a corner.
struct LensDomain {
  Vec2 vertex{0, 0};     // x0
  Vec2 far_vertex{0, 0}; // q, second intersection of the circles
  Real mu = 0;
  Real radius1 = 0, radius2 = 0;
  Vec2 center1{0, 0}, center2{0, 0};

  static LensDomain from_corner(const CornerData& corner);
  /// Corner at the origin, bisector along +x.
  static LensDomain canonical(Real mu, Real kappa1, Real kappa2);

  bool contains(const Vec2& p) const;
  /// Distances of an interior point to the two circles (R_i - |p - c_i|).
  Vec2 boundary_distances(const Vec2& p) const;
  /// Uniqueness radius of the (d1, d2) chart: min(R1, R2) sin(mu pi / 2) / 2.
  Real chart_radius() const;
  void validate(Real tol = 1e-9) const;
};

class ConvexCornerDomain {
public:
  /// Arcs must form a closed loop traversed with the domain on the left;
  /// every junction with distinct tangent rays must appear in `corners`.
  ConvexCornerDomain(std::vector<BoundaryArc> arcs, std::vector<CornerData> corners);

  const std::vector<BoundaryArc>& arcs() const { return arcs_; }
  const std::vector<CornerData>& corners() const { return corners_; }
  /// Indices of (sigma_1, sigma_2) for the given corner.
  std::pair<int, int> corner_arcs(int corner_index) const;

  bool contains(const Vec2& p) const;
  /// Distance to the boundary (zero outside and on the boundary... clamped feet).
  Real boundary_distance(const Vec2& p) const;
  /// +distance inside, -distance outside; continuous across the boundary.
  Real signed_boundary_function(const Vec2& p) const;
  /// Nearest boundary foot: arc index, parameter, distance.
  struct Foot {
    int arc = -1;
    Real param = 0;
    Real distance = 0;
  };
  Foot nearest_foot(const Vec2& p) const;
  /// Boundary curvature at the nearest foot of p.
  Real curvature_at_foot(const Vec2& p) const;

  Eigen::AlignedBox2d bounding_box() const { return bbox_; }
  Real diameter() const;

  /// Sampled support-line test: every sampled boundary point's tangent line
  /// keeps all sampled boundary points on the inner side.
  bool convexity_check(int samples_per_arc = 64, Real tol = 1e-9) const;

  /// Builds the two-arc representation of a lens.
  static ConvexCornerDomain from_lens(const LensDomain& lens);

private:
  std::vector<BoundaryArc> arcs_;
  std::vector<CornerData> corners_;
  std::vector<std::pair<int, int>> corner_arcs_;
  Eigen::AlignedBox2d bbox_;
};

// -- free operations ---------------------------------------------------------

/// Signed distance of p to the arc's supporting curve, positive on the
/// domain side. Throws DomainError outside the tubular neighborhood where
/// the foot point is unique.
Real signed_distance(const BoundaryArc& arc, const Vec2& p);

/// Distance between the two intersection points of circles of radii R1, R2
/// that are mutually tangent to two rays meeting at angle mu*pi.
Real corner_chord_length(Real radius1, Real radius2, Real mu);

/// The point of the lens chart with prescribed distances to the two circles;
/// branch nearer the corner vertex. d_i may be negative (outside circle i).
Vec2 point_from_distances(const LensDomain& lens, Real d1, Real d2);

/// The corner chart T = T^{-1}_{circles} o T_{curves}: maps p to the point
/// whose signed distances to the tangent circles equal p's signed distances
/// to the two boundary curves at the corner.
Vec2 corner_chart(const ConvexCornerDomain& domain, int corner_index, const Vec2& p);

Real boundary_curvature(const BoundaryArc& arc, Real s);

ConeDomain tangent_cone(const CornerData& corner);

/// Intersection points of two circles; throws DomainError when disjoint,
/// nested, or concentric. Returns the pair (may coincide when tangent).
std::pair<Vec2, Vec2> circle_intersection(const Vec2& c1, Real r1, const Vec2& c2, Real r2);

}  // namespace hypgraph
