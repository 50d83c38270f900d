#include "hypgraph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypgraph {

namespace {

Vec2 rot90(const Vec2& v) { return {-v.y(), v.x()}; }

}  // namespace

// -- BoundaryArc --------------------------------------------------------------

BoundaryArc BoundaryArc::circle(const Vec2& center, Real radius, Real angle_start,
                                Real angle_end) {
  if (radius <= 0) throw DomainError("BoundaryArc::circle: radius must be positive");
  if (angle_end <= angle_start)
    throw DomainError("BoundaryArc::circle: angle range must be increasing (CCW, domain inside)");
  BoundaryArc arc;
  arc.kind_ = ArcKind::CircleArc;
  arc.center_ = center;
  arc.radius_ = radius;
  arc.s0_ = angle_start;
  arc.s1_ = angle_end;
  arc.gamma_ = [center, radius](Real s) {
    return Vec2(center.x() + radius * std::cos(s), center.y() + radius * std::sin(s));
  };
  arc.dgamma_ = [radius](Real s) { return Vec2(-radius * std::sin(s), radius * std::cos(s)); };
  arc.ddgamma_ = [radius](Real s) { return Vec2(-radius * std::cos(s), -radius * std::sin(s)); };
  arc.max_curvature_ = 1 / radius;
  arc.closed_ = std::abs((angle_end - angle_start) - 2 * kPi) < 1e-12;
  arc.search_pad_ = 0;
  return arc;
}

BoundaryArc BoundaryArc::ellipse(const Vec2& center, Real semi_a, Real semi_b, Real rotation,
                                 Real s0, Real s1) {
  if (semi_a <= 0 || semi_b <= 0) throw DomainError("BoundaryArc::ellipse: semi-axes must be positive");
  if (s1 <= s0) throw DomainError("BoundaryArc::ellipse: parameter range must be increasing");
  BoundaryArc arc;
  arc.kind_ = ArcKind::EllipseArc;
  arc.center_ = center;
  arc.semi_a_ = semi_a;
  arc.semi_b_ = semi_b;
  arc.rotation_ = rotation;
  arc.s0_ = s0;
  arc.s1_ = s1;
  const Real cr = std::cos(rotation), sr = std::sin(rotation);
  auto embed = [center, cr, sr](Real u, Real v) {
    return Vec2(center.x() + cr * u - sr * v, center.y() + sr * u + cr * v);
  };
  auto embed_dir = [cr, sr](Real u, Real v) { return Vec2(cr * u - sr * v, sr * u + cr * v); };
  arc.gamma_ = [embed, semi_a, semi_b](Real s) {
    return embed(semi_a * std::cos(s), semi_b * std::sin(s));
  };
  arc.dgamma_ = [embed_dir, semi_a, semi_b](Real s) {
    return embed_dir(-semi_a * std::sin(s), semi_b * std::cos(s));
  };
  arc.ddgamma_ = [embed_dir, semi_a, semi_b](Real s) {
    return embed_dir(-semi_a * std::cos(s), -semi_b * std::sin(s));
  };
  arc.max_curvature_ = std::max(semi_a / (semi_b * semi_b), semi_b / (semi_a * semi_a));
  arc.closed_ = std::abs((s1 - s0) - 2 * kPi) < 1e-12;
  arc.search_pad_ = 0.25 * (s1 - s0);
  return arc;
}

BoundaryArc BoundaryArc::analytic(std::function<Vec2(Real)> gamma, std::function<Vec2(Real)> dgamma,
                                  std::function<Vec2(Real)> ddgamma, Real s0, Real s1) {
  if (s1 <= s0) throw DomainError("BoundaryArc::analytic: parameter range must be increasing");
  BoundaryArc arc;
  arc.kind_ = ArcKind::AnalyticArc;
  arc.gamma_ = std::move(gamma);
  arc.dgamma_ = std::move(dgamma);
  arc.ddgamma_ = std::move(ddgamma);
  arc.s0_ = s0;
  arc.s1_ = s1;
  arc.search_pad_ = 0.1 * (s1 - s0);
  Real kmax = 0;
  for (int i = 0; i <= 64; ++i) {
    const Real s = s0 + (s1 - s0) * i / 64.0;
    const Vec2 d1 = arc.dgamma_(s);
    if (d1.norm() < 1e-14)
      throw DomainError("BoundaryArc::analytic: parametrization is not regular");
    const Vec2 d2 = arc.ddgamma_(s);
    kmax = std::max(kmax, std::abs(d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(d1.norm(), 3));
  }
  arc.max_curvature_ = kmax;
  arc.closed_ = (arc.gamma_(s1) - arc.gamma_(s0)).norm() < 1e-12;
  return arc;
}

Vec2 BoundaryArc::tangent(Real s) const { return dgamma_(s).normalized(); }

Vec2 BoundaryArc::inner_normal(Real s) const { return rot90(tangent(s)); }

const Vec2& BoundaryArc::circle_center() const {
  if (kind_ != ArcKind::CircleArc) throw DomainError("not a circle arc");
  return center_;
}
Real BoundaryArc::circle_radius() const {
  if (kind_ != ArcKind::CircleArc) throw DomainError("not a circle arc");
  return radius_;
}
Real BoundaryArc::circle_angle_start() const {
  if (kind_ != ArcKind::CircleArc) throw DomainError("not a circle arc");
  return s0_;
}
Real BoundaryArc::circle_angle_end() const {
  if (kind_ != ArcKind::CircleArc) throw DomainError("not a circle arc");
  return s1_;
}
Vec2 BoundaryArc::ellipse_center() const {
  if (kind_ != ArcKind::EllipseArc) throw DomainError("not an ellipse arc");
  return center_;
}
Real BoundaryArc::ellipse_semi_a() const {
  if (kind_ != ArcKind::EllipseArc) throw DomainError("not an ellipse arc");
  return semi_a_;
}
Real BoundaryArc::ellipse_semi_b() const {
  if (kind_ != ArcKind::EllipseArc) throw DomainError("not an ellipse arc");
  return semi_b_;
}
Real BoundaryArc::ellipse_rotation() const {
  if (kind_ != ArcKind::EllipseArc) throw DomainError("not an ellipse arc");
  return rotation_;
}

Real BoundaryArc::foot_parameter(const Vec2& p) const {
  if (kind_ == ArcKind::CircleArc) {
    const Vec2 d = p - center_;
    // at the exact center every foot is equidistant; any angle serves
    if (d.norm() < 1e-14 * radius_) return 0.5 * (s0_ + s1_);
    Real ang = std::atan2(d.y(), d.x());
    // unwrap near the arc's angular window
    const Real mid = 0.5 * (s0_ + s1_);
    ang += 2 * kPi * std::round((mid - ang) / (2 * kPi));
    return ang;
  }
  // Closed arcs are periodic: seed one period and let the refinement window
  // extend freely past the seam (the parametrization is globally defined).
  const Real lo = closed_ ? s0_ : s0_ - search_pad_;
  const Real hi = closed_ ? s1_ : s1_ + search_pad_;
  constexpr int kSeeds = 64;
  Real best_s = lo, best_d2 = std::numeric_limits<Real>::max();
  for (int i = 0; i <= kSeeds; ++i) {
    const Real s = lo + (hi - lo) * i / kSeeds;
    const Real d2 = (p - gamma_(s)).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best_s = s;
    }
  }
  // Golden-section narrowing around the best seed, then Newton polish on
  // g(s) = (p - gamma) . gamma'.
  Real a = best_s - (hi - lo) / kSeeds;
  Real b = best_s + (hi - lo) / kSeeds;
  if (!closed_) {
    a = std::max(lo, a);
    b = std::min(hi, b);
  }
  const Real newton_lo = closed_ ? a - (hi - lo) / kSeeds : lo;
  const Real newton_hi = closed_ ? b + (hi - lo) / kSeeds : hi;
  const Real gr = 0.5 * (std::sqrt(5.0) - 1.0);
  Real x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  Real f1 = (p - gamma_(x1)).squaredNorm(), f2 = (p - gamma_(x2)).squaredNorm();
  for (int it = 0; it < 40 && (b - a) > 1e-6 * (hi - lo); ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = (p - gamma_(x1)).squaredNorm();
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = (p - gamma_(x2)).squaredNorm();
    }
  }
  Real s = 0.5 * (a + b);
  for (int it = 0; it < 60; ++it) {
    const Vec2 r = p - gamma_(s);
    const Vec2 d1 = dgamma_(s);
    const Real g = r.dot(d1);
    const Real gp = -d1.squaredNorm() + r.dot(ddgamma_(s));
    if (std::abs(gp) < 1e-300) break;
    const Real step = -g / gp;
    s = std::clamp(s + step, newton_lo, newton_hi);
    if (std::abs(step) < 1e-15 * (1 + std::abs(s))) break;
  }
  if (closed_) {
    const Real period = s1_ - s0_;
    s = s0_ + std::fmod(s - s0_, period);
    if (s < s0_) s += period;
  }
  return s;
}

Real BoundaryArc::signed_distance(const Vec2& p) const {
  if (kind_ == ArcKind::CircleArc) return radius_ - (p - center_).norm();
  const Real s = foot_parameter(p);
  const Vec2 foot = gamma_(s);
  const Real dist = (p - foot).norm();
  if (max_curvature_ > 0 && dist > 0.95 / max_curvature_)
    throw DomainError("signed_distance: point outside tubular neighborhood, foot may be ambiguous");
  const Real side = (p - foot).dot(rot90(dgamma_(s)));
  return side >= 0 ? dist : -dist;
}

Real BoundaryArc::distance_to_arc(const Vec2& p, Real* foot_param) const {
  Real s = std::clamp(foot_parameter(p), s0_, s1_);
  // endpoints can beat the interior foot when the point is past the arc
  Real d = (p - gamma_(s)).norm();
  const Real d0 = (p - gamma_(s0_)).norm(), d1 = (p - gamma_(s1_)).norm();
  if (d0 < d) {
    d = d0;
    s = s0_;
  }
  if (d1 < d) {
    d = d1;
    s = s1_;
  }
  if (foot_param) *foot_param = s;
  return d;
}

Real BoundaryArc::curvature(Real s) const {
  if (kind_ == ArcKind::CircleArc) return 1 / radius_;
  const Vec2 d1 = dgamma_(s);
  const Vec2 d2 = ddgamma_(s);
  return (d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(d1.norm(), 3);
}

// -- CornerData / ConeDomain --------------------------------------------------

void CornerData::validate(Real tol) const {
  if (!(mu > 0 && mu < 1)) throw DomainError("CornerData: mu must lie in (0, 1)");
  if (kappa1 <= 0 || kappa2 <= 0) throw DomainError("CornerData: curvatures must be positive");
  if (std::abs(nu1.norm() - 1) > tol || std::abs(nu2.norm() - 1) > tol)
    throw DomainError("CornerData: normals must be unit vectors");
  // tangent rays meet at angle mu*pi <=> inner normals meet at (1 - mu)*pi
  const Real normal_angle = std::acos(std::clamp(nu1.dot(nu2), -1.0, 1.0));
  if (std::abs(normal_angle - (1 - mu) * kPi) > 1e-6 + tol)
    throw DomainError("CornerData: normals inconsistent with opening angle mu*pi");
}

Vec2 ConeDomain::edge_direction(int i) const {
  const Real half = 0.5 * opening;
  const Real ang = std::atan2(bisector.y(), bisector.x()) + (i == 0 ? -half : half);
  return {std::cos(ang), std::sin(ang)};
}

bool ConeDomain::contains(const Vec2& p) const {
  const auto [r, theta] = polar(p);
  return r > 0 && theta > 0 && theta < opening;
}

std::pair<Real, Real> ConeDomain::polar(const Vec2& p) const {
  const Vec2 d = p - vertex;
  const Real r = d.norm();
  const Vec2 e0 = edge_direction(0);
  const Real theta = std::atan2(e0.x() * d.y() - e0.y() * d.x(), e0.dot(d));
  return {r, theta};
}

void ConeDomain::validate() const {
  if (!(opening > 0 && opening < kPi)) throw DomainError("ConeDomain: opening must be in (0, pi)");
  if (std::abs(bisector.norm() - 1) > 1e-12) throw DomainError("ConeDomain: bisector must be unit");
}

ConeDomain tangent_cone(const CornerData& corner) {
  corner.validate();
  ConeDomain cone;
  cone.vertex = corner.vertex;
  cone.bisector = (corner.nu1 + corner.nu2).normalized();
  cone.opening = corner.mu * kPi;
  return cone;
}

// -- LensDomain ---------------------------------------------------------------

std::pair<Vec2, Vec2> circle_intersection(const Vec2& c1, Real r1, const Vec2& c2, Real r2) {
  const Vec2 d = c2 - c1;
  const Real dist = d.norm();
  if (dist < 1e-15 * (r1 + r2)) throw DomainError("circle_intersection: concentric circles");
  if (dist > r1 + r2) throw DomainError("circle_intersection: circles are disjoint");
  if (dist < std::abs(r1 - r2)) throw DomainError("circle_intersection: circles are nested");
  const Real a = (dist * dist + r1 * r1 - r2 * r2) / (2 * dist);
  const Real h2 = r1 * r1 - a * a;
  const Real h = std::sqrt(std::max(h2, 0.0));
  const Vec2 base = c1 + (a / dist) * d;
  const Vec2 perp = rot90(d / dist);
  return {base + h * perp, base - h * perp};
}

LensDomain LensDomain::from_corner(const CornerData& corner) {
  corner.validate();
  LensDomain lens;
  lens.vertex = corner.vertex;
  lens.mu = corner.mu;
  lens.radius1 = corner.radius1();
  lens.radius2 = corner.radius2();
  lens.center1 = corner.vertex + lens.radius1 * corner.nu1;
  lens.center2 = corner.vertex + lens.radius2 * corner.nu2;
  const auto [pa, pb] = circle_intersection(lens.center1, lens.radius1, lens.center2, lens.radius2);
  lens.far_vertex = ((pa - lens.vertex).norm() > (pb - lens.vertex).norm()) ? pa : pb;
  lens.validate();
  return lens;
}

LensDomain LensDomain::canonical(Real mu, Real kappa1, Real kappa2) {
  if (!(mu > 0 && mu < 1)) throw DomainError("LensDomain: mu must lie in (0, 1)");
  if (kappa1 <= 0 || kappa2 <= 0) throw DomainError("LensDomain: curvatures must be positive");
  CornerData corner;
  corner.vertex = Vec2(0, 0);
  corner.mu = mu;
  const Real half_normal = 0.5 * (1 - mu) * kPi;
  corner.nu1 = Vec2(std::cos(-half_normal), std::sin(-half_normal));
  corner.nu2 = Vec2(std::cos(half_normal), std::sin(half_normal));
  corner.kappa1 = kappa1;
  corner.kappa2 = kappa2;
  return from_corner(corner);
}

bool LensDomain::contains(const Vec2& p) const {
  return (p - center1).norm() < radius1 && (p - center2).norm() < radius2;
}

Vec2 LensDomain::boundary_distances(const Vec2& p) const {
  return {radius1 - (p - center1).norm(), radius2 - (p - center2).norm()};
}

Real LensDomain::chart_radius() const {
  return 0.5 * std::min(radius1, radius2) * std::sin(0.5 * mu * kPi);
}

void LensDomain::validate(Real tol) const {
  if (!(mu > 0 && mu < 1)) throw DomainError("LensDomain: mu must lie in (0, 1)");
  const Real scale = std::max(radius1, radius2);
  for (const Vec2& v : {vertex, far_vertex}) {
    if (std::abs((v - center1).norm() - radius1) > tol * scale ||
        std::abs((v - center2).norm() - radius2) > tol * scale)
      throw DomainError("LensDomain: vertices must lie on both circles");
  }
  // circles meet at angle mu*pi: angle between radii vectors is (1 - mu)*pi
  const Vec2 u1 = (center1 - vertex).normalized();
  const Vec2 u2 = (center2 - vertex).normalized();
  const Real ang = std::acos(std::clamp(u1.dot(u2), -1.0, 1.0));
  if (std::abs(ang - (1 - mu) * kPi) > 1e-7)
    throw DomainError("LensDomain: circles do not meet at angle mu*pi");
}

// -- ConvexCornerDomain -------------------------------------------------------

ConvexCornerDomain::ConvexCornerDomain(std::vector<BoundaryArc> arcs,
                                       std::vector<CornerData> corners)
    : arcs_(std::move(arcs)), corners_(std::move(corners)) {
  if (arcs_.empty()) throw DomainError("ConvexCornerDomain: no arcs");
  const Real scale = [&] {
    Real s = 0;
    for (const auto& a : arcs_) {
      const Vec2 mid = a.point(0.5 * (a.param_start() + a.param_end()));
      s = std::max(s, (a.end_point() - a.start_point()).norm());
      s = std::max(s, (mid - a.start_point()).norm());
    }
    return std::max(s, 1e-12);
  }();
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const auto& next = arcs_[(i + 1) % arcs_.size()];
    if ((arcs_[i].end_point() - next.start_point()).norm() > 1e-7 * scale)
      throw DomainError("ConvexCornerDomain: arcs do not form a closed loop");
  }
  // junctions with distinct tangent rays must carry a corner entry
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const auto& next = arcs_[(i + 1) % arcs_.size()];
    const Vec2 t_end = arcs_[i].tangent(arcs_[i].param_end());
    const Vec2 t_start = next.tangent(next.param_start());
    if (t_end.dot(t_start) < 1 - 1e-9) {
      const Vec2 v = arcs_[i].end_point();
      const bool found = std::any_of(corners_.begin(), corners_.end(), [&](const CornerData& c) {
        return (c.vertex - v).norm() < 1e-7 * scale;
      });
      if (!found)
        throw DomainError("ConvexCornerDomain: junction with distinct tangents lacks CornerData");
    }
  }
  // resolve sigma_1 / sigma_2 arc indices for every corner, matching nu_i
  for (const auto& corner : corners_) {
    corner.validate();
    int i1 = -1, i2 = -1;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      for (Real s : {arcs_[i].param_start(), arcs_[i].param_end()}) {
        if ((arcs_[i].point(s) - corner.vertex).norm() > 1e-7 * scale) continue;
        const Vec2 nu = arcs_[i].inner_normal(s);
        if ((nu - corner.nu1).norm() < 1e-5) i1 = static_cast<int>(i);
        if ((nu - corner.nu2).norm() < 1e-5) i2 = static_cast<int>(i);
      }
    }
    if (i1 < 0 || i2 < 0)
      throw DomainError("ConvexCornerDomain: corner normals do not match any incident arc");
    corner_arcs_.emplace_back(i1, i2);
  }
  bbox_.setEmpty();
  for (const auto& arc : arcs_) {
    for (int i = 0; i <= 128; ++i) {
      const Real s =
          arc.param_start() + (arc.param_end() - arc.param_start()) * i / 128.0;
      bbox_.extend(arc.point(s));
    }
  }
}

std::pair<int, int> ConvexCornerDomain::corner_arcs(int corner_index) const {
  return corner_arcs_.at(static_cast<std::size_t>(corner_index));
}

ConvexCornerDomain::Foot ConvexCornerDomain::nearest_foot(const Vec2& p) const {
  Foot best;
  best.distance = std::numeric_limits<Real>::max();
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    Real s;
    const Real d = arcs_[i].distance_to_arc(p, &s);
    if (d < best.distance) best = {static_cast<int>(i), s, d};
  }
  return best;
}

bool ConvexCornerDomain::contains(const Vec2& p) const {
  const Foot foot = nearest_foot(p);
  const auto& arc = arcs_[static_cast<std::size_t>(foot.arc)];
  const Real span = arc.param_end() - arc.param_start();
  const Real end_tol = 1e-9 * span;
  const bool at_start = foot.param <= arc.param_start() + end_tol;
  const bool at_end = foot.param >= arc.param_end() - end_tol;
  if (!at_start && !at_end) {
    return (p - arc.point(foot.param)).dot(arc.inner_normal(foot.param)) > 0;
  }
  // nearest foot is a junction: locally the domain is the intersection of the
  // two incident inner half-regions
  const Vec2 v = at_start ? arc.start_point() : arc.end_point();
  int other = -1;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    if (static_cast<int>(i) == foot.arc) continue;
    if ((arcs_[i].start_point() - v).norm() < 1e-7 || (arcs_[i].end_point() - v).norm() < 1e-7)
      other = static_cast<int>(i);
  }
  if (other < 0) return (p - arc.point(foot.param)).dot(arc.inner_normal(foot.param)) > 0;
  return arc.signed_distance(p) > 0 && arcs_[static_cast<std::size_t>(other)].signed_distance(p) > 0;
}

Real ConvexCornerDomain::boundary_distance(const Vec2& p) const { return nearest_foot(p).distance; }

Real ConvexCornerDomain::signed_boundary_function(const Vec2& p) const {
  const Real d = boundary_distance(p);
  return contains(p) ? d : -d;
}

Real ConvexCornerDomain::curvature_at_foot(const Vec2& p) const {
  const Foot foot = nearest_foot(p);
  return arcs_[static_cast<std::size_t>(foot.arc)].curvature(foot.param);
}

Real ConvexCornerDomain::diameter() const { return bbox_.diagonal().norm(); }

bool ConvexCornerDomain::convexity_check(int samples_per_arc, Real tol) const {
  std::vector<Vec2> pts, normals;
  for (const auto& arc : arcs_) {
    for (int i = 0; i < samples_per_arc; ++i) {
      const Real s = arc.param_start() +
                     (arc.param_end() - arc.param_start()) * (i + 0.5) / samples_per_arc;
      pts.push_back(arc.point(s));
      normals.push_back(arc.inner_normal(s));
    }
  }
  const Real scale = diameter();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if ((pts[j] - pts[i]).dot(normals[i]) < -tol * scale) return false;
  return true;
}

ConvexCornerDomain ConvexCornerDomain::from_lens(const LensDomain& lens) {
  lens.validate();
  // Arc of circle i runs between the two vertices through the side interior to
  // the other circle; orientation CCW (domain inside each circle).
  auto make_arc = [&](const Vec2& c, Real r, const Vec2& other_c, Real other_r) {
    Real a_v = std::atan2((lens.vertex - c).y(), (lens.vertex - c).x());
    Real a_q = std::atan2((lens.far_vertex - c).y(), (lens.far_vertex - c).x());
    // candidate CCW sweep from a_v to a_q
    Real sweep = a_q - a_v;
    while (sweep <= 0) sweep += 2 * kPi;
    const Real a_mid = a_v + 0.5 * sweep;
    const Vec2 mid = c + r * Vec2(std::cos(a_mid), std::sin(a_mid));
    if ((mid - other_c).norm() <= other_r) return BoundaryArc::circle(c, r, a_v, a_v + sweep);
    // otherwise the complementary sweep starting from a_q
    Real sweep2 = a_v - a_q;
    while (sweep2 <= 0) sweep2 += 2 * kPi;
    return BoundaryArc::circle(c, r, a_q, a_q + sweep2);
  };
  BoundaryArc arc1 = make_arc(lens.center1, lens.radius1, lens.center2, lens.radius2);
  BoundaryArc arc2 = make_arc(lens.center2, lens.radius2, lens.center1, lens.radius1);
  std::vector<BoundaryArc> arcs;
  if ((arc1.end_point() - arc2.start_point()).norm() < 1e-9 * lens.radius1) {
    arcs = {arc1, arc2};
  } else {
    arcs = {arc2, arc1};
  }

  auto corner_at = [&](const Vec2& v) {
    CornerData corner;
    corner.vertex = v;
    corner.mu = lens.mu;
    corner.nu1 = (lens.center1 - v).normalized();
    corner.nu2 = (lens.center2 - v).normalized();
    corner.kappa1 = 1 / lens.radius1;
    corner.kappa2 = 1 / lens.radius2;
    return corner;
  };
  return ConvexCornerDomain(arcs, {corner_at(lens.vertex), corner_at(lens.far_vertex)});
}

// -- free operations ----------------------------------------------------------

Real signed_distance(const BoundaryArc& arc, const Vec2& p) { return arc.signed_distance(p); }

Real corner_chord_length(Real radius1, Real radius2, Real mu) {
  if (radius1 <= 0 || radius2 <= 0) throw DomainError("corner_chord_length: radii must be positive");
  if (!(mu > 0 && mu < 1)) throw DomainError("corner_chord_length: mu must lie in (0, 1)");
  const Real ang = kPi - mu * kPi;
  // R1^2 + R2^2 - 2 R1 R2 cos written cancellation-free
  const Real half_sin = std::sin(0.5 * ang);
  const Real den = std::sqrt((radius1 - radius2) * (radius1 - radius2) +
                             4 * radius1 * radius2 * half_sin * half_sin);
  return 2 * radius1 * radius2 * std::sin(ang) / den;
}

Vec2 point_from_distances(const LensDomain& lens, Real d1, Real d2) {
  const Real r1 = lens.radius1 - d1;
  const Real r2 = lens.radius2 - d2;
  if (r1 <= 0 || r2 <= 0)
    throw DomainError("point_from_distances: offset circle radius is not positive");
  const auto [pa, pb] = circle_intersection(lens.center1, r1, lens.center2, r2);
  const Real da = (pa - lens.vertex).norm(), db = (pb - lens.vertex).norm();
  Vec2 p;
  if (std::abs(da - db) > 1e-14 * std::max(da, db)) {
    p = (da < db) ? pa : pb;
  } else {
    // tie broken lexicographically
    p = (pa.x() < pb.x() || (pa.x() == pb.x() && pa.y() <= pb.y())) ? pa : pb;
  }
  if ((p - lens.vertex).norm() > lens.chart_radius() * (1 + 1e-12))
    throw DomainError("point_from_distances: requested point is beyond the chart radius");
  return p;
}

Vec2 corner_chart(const ConvexCornerDomain& domain, int corner_index, const Vec2& p) {
  const CornerData& corner = domain.corners().at(static_cast<std::size_t>(corner_index));
  const auto [i1, i2] = domain.corner_arcs(corner_index);
  const Real s1 = domain.arcs()[static_cast<std::size_t>(i1)].signed_distance(p);
  const Real s2 = domain.arcs()[static_cast<std::size_t>(i2)].signed_distance(p);
  const LensDomain lens = LensDomain::from_corner(corner);
  return point_from_distances(lens, s1, s2);
}

Real boundary_curvature(const BoundaryArc& arc, Real s) {
  if (s < arc.param_start() - 1e-12 || s > arc.param_end() + 1e-12)
    throw DomainError("boundary_curvature: parameter outside the arc range");
  return arc.curvature(s);
}

}  // namespace hypgraph
