#include "hypgraph/verification.hpp"

#include "hypgraph/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hypgraph {

namespace {

std::string provenance(const ScalarField& field) {
  std::ostringstream os;
  os << "spacing=" << field.grid->spacing << " unknowns=" << field.grid->unknown_count()
     << " residual=" << field.final_residual;
  return os.str();
}

void finish_report(AsymptoticsReport& rep, const std::vector<Real>& floor, Real floor_factor) {
  const auto usable = rep.usable_levels(floor, floor_factor);
  rep.decay_pass = usable.size() >= 2;
  for (std::size_t k = 1; k < usable.size(); ++k)
    if (rep.annuli[usable[k]].sup >= rep.annuli[usable[k - 1]].sup) rep.decay_pass = false;
  if (usable.size() >= 2) {
    const LineFit fit = fit_decay_exponent(rep.annuli, usable);
    rep.fitted_exponent = fit.slope;
    rep.fit_rms = fit.rms_residual;
  }
  rep.pass = rep.decay_pass;
}

}  // namespace

std::vector<std::size_t> AsymptoticsReport::usable_levels(const std::vector<Real>& floor,
                                                          Real floor_factor) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < annuli.size(); ++k) {
    if (annuli[k].count <= 0) continue;
    if (!floor.empty()) {
      const Real fl = floor[std::min(k, floor.size() - 1)];
      if (annuli[k].sup <= floor_factor * fl) continue;
    }
    out.push_back(k);
  }
  return out;
}

LineFit fit_decay_exponent(const std::vector<AnnulusStat>& annuli,
                           const std::vector<std::size_t>& levels) {
  std::vector<Real> lx, ly;
  for (const std::size_t k : levels) {
    if (annuli[k].sup <= 0) continue;
    lx.push_back(std::log(std::sqrt(annuli[k].r_outer * std::max(annuli[k].r_inner, 1e-300))));
    ly.push_back(std::log(annuli[k].sup));
  }
  if (lx.size() < 2) throw NumericalError("fit_decay_exponent: fewer than two usable levels");
  return fit_line(lx, ly);
}

AsymptoticsReport check_smooth_expansion(const ScalarField& field, Real d0, int levels,
                                         int min_count) {
  const GradedGrid& g = *field.grid;
  AsymptoticsReport rep;
  rep.case_name = "smooth_expansion";
  rep.detail = provenance(field);
  Real dmax = 0;
  for (int u = 0; u < g.unknown_count(); ++u)
    dmax = std::max(dmax, g.distance[static_cast<std::size_t>(u)]);
  if (d0 <= 0) d0 = 0.5 * dmax;
  rep.max_usable_radius = d0;

  rep.annuli.assign(static_cast<std::size_t>(levels), {});
  for (int k = 0; k < levels; ++k) {
    rep.annuli[static_cast<std::size_t>(k)].r_outer = d0 * std::pow(2.0, -k);
    rep.annuli[static_cast<std::size_t>(k)].r_inner = d0 * std::pow(2.0, -k - 1);
  }
  for (int u = 0; u < g.unknown_count(); ++u) {
    const Real d = g.distance[static_cast<std::size_t>(u)];
    const Real H = g.foot_curvature[static_cast<std::size_t>(u)];
    if (d <= 0 || H <= 0) continue;
    const Real dev = std::abs(std::sqrt(H / (2 * d)) * field.f[u] - 1);
    for (auto& band : rep.annuli) {
      if (d <= band.r_outer && d > band.r_inner) {
        band.sup = std::max(band.sup, dev);
        band.count++;
        break;
      }
    }
  }
  for (auto& band : rep.annuli)
    if (band.count < min_count) band.count = 0;  // starved, dropped by usable_levels
  finish_report(rep, {}, 0);
  return rep;
}

AsymptoticsReport check_cone_growth(const ScalarField& field, const ConeSolutionTable& table,
                                    int corner_index, Real r0, int levels, int min_count,
                                    Real* one_sided_margin) {
  const GradedGrid& g = *field.grid;
  const CornerData& corner = g.domain->corners().at(static_cast<std::size_t>(corner_index));
  const ConeDomain cone = tangent_cone(corner);
  if (std::abs(table.mu - corner.mu) > 1e-12)
    throw DomainError("check_cone_growth: table opening does not match the corner");
  AsymptoticsReport rep;
  rep.case_name = "cone_growth";
  rep.detail = provenance(field);
  if (r0 <= 0) r0 = 0.5 * LensDomain::from_corner(corner).chart_radius();
  rep.max_usable_radius = r0;
  rep.annuli.assign(static_cast<std::size_t>(levels), {});
  for (int k = 0; k < levels; ++k) {
    rep.annuli[static_cast<std::size_t>(k)].r_outer = r0 * std::pow(2.0, -k);
    rep.annuli[static_cast<std::size_t>(k)].r_inner = r0 * std::pow(2.0, -k - 1);
  }
  Real margin = 0;
  for (int u = 0; u < g.unknown_count(); ++u) {
    const Vec2 p = g.position(g.node_of_unknown[static_cast<std::size_t>(u)]);
    const auto [rho, theta] = cone.polar(p);
    if (rho <= 0 || rho > r0 || theta <= 0 || theta >= cone.opening) continue;
    if (g.distance[static_cast<std::size_t>(u)] < std::pow(rho, 1.5)) continue;
    const Real model = rho * eval_profile(table, theta);
    if (model <= 0) continue;
    const Real ratio = field.f[u] / model;
    margin = std::max(margin, ratio - 1);
    const Real dev = std::abs(ratio - 1);
    for (auto& band : rep.annuli) {
      if (rho <= band.r_outer && rho > band.r_inner) {
        band.sup = std::max(band.sup, dev);
        band.count++;
        break;
      }
    }
  }
  if (one_sided_margin) *one_sided_margin = margin;
  for (auto& band : rep.annuli)
    if (band.count < min_count) band.count = 0;
  finish_report(rep, {}, 0);
  return rep;
}

AsymptoticsReport check_localization(const ScalarField& field, const ScalarField& field_star,
                                     const Vec2& x0, Real r0, int levels, int min_count) {
  const GradedGrid& g = *field.grid;
  const GradedGrid& gs = *field_star.grid;
  if (std::abs(g.spacing - gs.spacing) > 1e-14)
    throw DomainError("check_localization: grids must share the spacing");
  // shared lattice: origins must differ by an integer number of cells
  const Vec2 shift = (gs.origin - g.origin) / g.spacing;
  const Vec2 shift_round(std::round(shift.x()), std::round(shift.y()));
  if ((shift - shift_round).norm() > 1e-9)
    throw DomainError("check_localization: grids are not on a common lattice");

  // sampled geometric identity of the two domains near x0
  for (int k = 0; k < 64; ++k) {
    const Real ang = 2 * kPi * k / 64.0;
    for (Real frac : {0.3, 0.6, 0.9}) {
      const Vec2 p = x0 + frac * r0 * Vec2(std::cos(ang), std::sin(ang));
      const Real s1 = g.domain->signed_boundary_function(p);
      const Real s2 = gs.domain->signed_boundary_function(p);
      if (std::abs(s1 - s2) > 1e-8 * (1 + r0))
        throw DomainError("check_localization: domains differ inside the localization ball");
    }
  }

  AsymptoticsReport rep;
  rep.case_name = "localization";
  rep.detail = provenance(field) + " | star " + provenance(field_star);
  rep.max_usable_radius = r0;
  rep.annuli.assign(static_cast<std::size_t>(levels), {});
  for (int k = 0; k < levels; ++k) {
    rep.annuli[static_cast<std::size_t>(k)].r_outer = r0 * std::pow(2.0, -k);
    rep.annuli[static_cast<std::size_t>(k)].r_inner = r0 * std::pow(2.0, -k - 1);
  }
  const int di = static_cast<int>(shift_round.x()), dj = static_cast<int>(shift_round.y());
  for (int u = 0; u < g.unknown_count(); ++u) {
    const int flat = g.node_of_unknown[static_cast<std::size_t>(u)];
    const int i = flat % g.nx, j = flat / g.nx;
    const int is = i - di, js = j - dj;
    if (is < 0 || js < 0 || is >= gs.nx || js >= gs.ny) continue;
    const int us = gs.unknown_index[static_cast<std::size_t>(gs.flat(is, js))];
    if (us < 0) continue;
    const Vec2 p = g.position(flat);
    const Real rho = (p - x0).norm();
    if (rho <= 0 || rho > r0) continue;
    if (field.f[u] <= 0) continue;
    const Real dev = std::abs(field.f[u] - field_star.f[us]) / field.f[u];
    for (auto& band : rep.annuli) {
      if (rho <= band.r_outer && rho > band.r_inner) {
        band.sup = std::max(band.sup, dev);
        band.count++;
        break;
      }
    }
  }
  for (auto& band : rep.annuli)
    if (band.count < min_count) band.count = 0;
  finish_report(rep, {}, 0);
  return rep;
}

AsymptoticsReport check_corner_estimate(const ScalarField& field, int corner_index,
                                        const LensModel& model,
                                        const std::vector<Real>& floor_per_annulus, Real r0,
                                        int levels, int min_count) {
  const GradedGrid& g = *field.grid;
  const ConvexCornerDomain& domain = *g.domain;
  const CornerData& corner = domain.corners().at(static_cast<std::size_t>(corner_index));
  AsymptoticsReport rep;
  rep.case_name = "corner_estimate";
  rep.detail = provenance(field);
  if (r0 <= 0) r0 = 0.5 * model.lens.chart_radius();
  rep.annuli.assign(static_cast<std::size_t>(levels), {});
  for (int k = 0; k < levels; ++k) {
    rep.annuli[static_cast<std::size_t>(k)].r_outer = r0 * std::pow(2.0, -k);
    rep.annuli[static_cast<std::size_t>(k)].r_inner = r0 * std::pow(2.0, -k - 1);
  }
  Real max_ok_radius = 0;
  for (int u = 0; u < g.unknown_count(); ++u) {
    const Vec2 p = g.position(g.node_of_unknown[static_cast<std::size_t>(u)]);
    const Real rho = (p - corner.vertex).norm();
    if (rho <= 0 || rho > r0) continue;
    Real dev;
    try {
      const Vec2 tp = corner_chart(domain, corner_index, p);
      const Real mh = model_height(model, tp);
      if (mh <= 0) continue;
      dev = std::abs(field.f[u] / mh - 1);
      max_ok_radius = std::max(max_ok_radius, rho);
    } catch (const DomainError&) {
      continue;  // chart breakdown at this node
    }
    for (auto& band : rep.annuli) {
      if (rho <= band.r_outer && rho > band.r_inner) {
        band.sup = std::max(band.sup, dev);
        band.count++;
        break;
      }
    }
  }
  rep.max_usable_radius = max_ok_radius;
  for (auto& band : rep.annuli)
    if (band.count < min_count) band.count = 0;
  finish_report(rep, floor_per_annulus, 3.0);
  {
    const auto usable = rep.usable_levels(floor_per_annulus, 3.0);
    if (usable.size() < 4) {
      rep.pass = false;
      std::ostringstream os;
      os << rep.detail << " | only " << usable.size()
         << " usable levels, max usable radius " << max_ok_radius;
      rep.detail = os.str();
    }
  }
  return rep;
}

std::vector<PropertyResult> property_suite(const PropertySuiteInput& input) {
  if (!input.primary) throw DomainError("property_suite: primary field required");
  std::vector<PropertyResult> results;
  const ScalarField& field = *input.primary;
  const GradedGrid& g = *field.grid;

  {  // Hoelder bound with the dimension-free constant
    PropertyResult res;
    res.name = "holder_bound";
    const Real diam = g.domain->diameter();
    const Real constant = std::cbrt(3 * diam * diam) * (1 + 5 * std::cbrt(g.spacing));
    std::mt19937 rng(input.seed);
    std::uniform_int_distribution<int> pick(0, g.unknown_count() - 1);
    std::vector<int> sample;
    for (int k = 0; k < input.holder_samples; ++k) sample.push_back(pick(rng));
    res.pass = true;
    res.margin = std::numeric_limits<Real>::max();
    for (std::size_t a = 0; a < sample.size(); ++a) {
      const Vec2 pa = g.position(g.node_of_unknown[static_cast<std::size_t>(sample[a])]);
      for (std::size_t b = a + 1; b < sample.size(); ++b) {
        const Vec2 pb = g.position(g.node_of_unknown[static_cast<std::size_t>(sample[b])]);
        const Real dist = (pa - pb).norm();
        if (dist <= 0) continue;
        const Real bound = constant * std::cbrt(dist);
        const Real diff = std::abs(field.f[sample[a]] - field.f[sample[b]]);
        if (bound - diff < res.margin) {
          res.margin = bound - diff;
          res.witness = pa;
        }
        if (diff > bound) res.pass = false;
      }
    }
    results.push_back(res);
  }

  {  // midpoint concavity along axis-aligned triples
    PropertyResult res;
    res.name = "concavity";
    res.pass = true;
    res.margin = std::numeric_limits<Real>::max();
    for (int u = 0; u < g.unknown_count(); ++u) {
      const int flat = g.node_of_unknown[static_cast<std::size_t>(u)];
      const int i = flat % g.nx, j = flat / g.nx;
      for (const int stride : {1, 2, 4, 8}) {
        for (const auto& [di, dj] : {std::pair{stride, 0}, std::pair{0, stride}}) {
          if (!g.is_inside(i - di, j - dj) || !g.is_inside(i + di, j + dj)) continue;
          const int um = g.unknown_index[static_cast<std::size_t>(g.flat(i - di, j - dj))];
          const int up = g.unknown_index[static_cast<std::size_t>(g.flat(i + di, j + dj))];
          const Real mid = 0.5 * (field.f[um] + field.f[up]);
          const Real slack = field.f[u] - mid + input.concavity_tol;
          if (slack < res.margin) {
            res.margin = slack;
            res.witness = g.position(flat);
          }
          if (slack < 0) res.pass = false;
        }
      }
    }
    results.push_back(res);
  }

  if (input.larger_domain) {  // inclusion monotonicity on shared nodes
    PropertyResult res;
    res.name = "inclusion_monotonicity";
    res.pass = true;
    res.margin = std::numeric_limits<Real>::max();
    const GradedGrid& gb = *input.larger_domain->grid;
    if (std::abs(g.spacing - gb.spacing) > 1e-14)
      throw DomainError("property_suite: inclusion pair must share the spacing");
    const Vec2 shift = (gb.origin - g.origin) / g.spacing;
    const int di = static_cast<int>(std::round(shift.x()));
    const int dj = static_cast<int>(std::round(shift.y()));
    const Real scale = std::max(1.0, input.larger_domain->f.maxCoeff());
    for (int u = 0; u < g.unknown_count(); ++u) {
      const int flat = g.node_of_unknown[static_cast<std::size_t>(u)];
      const int i = flat % g.nx - di, j = flat / g.nx - dj;
      if (i < 0 || j < 0 || i >= gb.nx || j >= gb.ny) continue;
      const int ub = gb.unknown_index[static_cast<std::size_t>(gb.flat(i, j))];
      if (ub < 0) continue;
      const Real slack =
          input.larger_domain->f[ub] + 2 * input.comparison_tol * scale - field.f[u];
      if (slack < res.margin) {
        res.margin = slack;
        res.witness = g.position(flat);
      }
      if (slack < 0) res.pass = false;
    }
    results.push_back(res);
  }

  if (input.scaled) {  // k-scaling: f_k(k x) = k f(x) at corresponding nodes
    PropertyResult res;
    res.name = "scaling";
    res.pass = true;
    res.margin = std::numeric_limits<Real>::max();
    const GradedGrid& gk = *input.scaled->grid;
    const Real k = input.scale_factor;
    if (std::abs(gk.spacing - k * g.spacing) > 1e-12)
      throw DomainError("property_suite: scaled grid must have spacing k h");
    const Vec2 shift = (gk.origin - k * g.origin) / gk.spacing;
    const int di = static_cast<int>(std::round(shift.x()));
    const int dj = static_cast<int>(std::round(shift.y()));
    if ((shift - Vec2(di, dj)).norm() > 1e-9)
      throw DomainError("property_suite: scaled grid origin must be k times the base origin");
    const Real scale = std::max(1.0, input.scaled->f.maxCoeff());
    for (int u = 0; u < g.unknown_count(); ++u) {
      const int flat = g.node_of_unknown[static_cast<std::size_t>(u)];
      const int i = flat % g.nx - di, j = flat / g.nx - dj;
      if (i < 0 || j < 0 || i >= gk.nx || j >= gk.ny) continue;
      const int uk = gk.unknown_index[static_cast<std::size_t>(gk.flat(i, j))];
      if (uk < 0) continue;
      const Real dev = std::abs(input.scaled->f[uk] - k * field.f[u]);
      const Real slack = 2 * input.comparison_tol * scale - dev;
      if (slack < res.margin) {
        res.margin = slack;
        res.witness = g.position(flat);
      }
      if (slack < 0) res.pass = false;
    }
    results.push_back(res);
  }

  return results;
}

}  // namespace hypgraph
