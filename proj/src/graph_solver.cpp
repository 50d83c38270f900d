#include "hypgraph/graph_solver.hpp"

#include "hypgraph/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypgraph {

namespace {

constexpr int kW = 0, kE = 1, kS = 2, kN = 3;

// Directional derivative weights on the (W, P, E) triple with arms (hm, hp):
// first derivative and Shortley-Weller second derivative.
struct AxisWeights {
  Real d1_m, d1_p, d1_c;
  Real d2_m, d2_p, d2_c;
};

AxisWeights axis_weights(Real hm, Real hp) {
  AxisWeights w;
  w.d1_m = -hp / (hm * (hm + hp));
  w.d1_p = hm / (hp * (hm + hp));
  w.d1_c = (hp - hm) / (hm * hp);
  w.d2_m = 2 / (hm * (hm + hp));
  w.d2_p = 2 / (hp * (hm + hp));
  w.d2_c = -2 / (hm * hp);
  return w;
}

struct StencilEntry {
  int unknown;  // -1 means boundary (value 0)
  Real cx = 0, cy = 0, cxx = 0, cyy = 0, cxy = 0;
};

// Up to 9 entries: P, W, E, S, N and diagonals participating in w_xy.
struct Stencil {
  StencilEntry entries[9];
  int count = 0;

  StencilEntry& at(int unknown) {
    for (int k = 0; k < count; ++k)
      if (entries[k].unknown == unknown) return entries[k];
    entries[count].unknown = unknown;
    entries[count].cx = entries[count].cy = entries[count].cxx = entries[count].cyy =
        entries[count].cxy = 0;
    return entries[count++];
  }
};

struct NodeContext {
  Stencil stencil;
  int self = -1;
};

// Builds the linear functionals (w_x, w_y, w_xx, w_yy, w_xy) of node u.
NodeContext node_context(const GradedGrid& g, int u) {
  NodeContext ctx;
  ctx.self = u;
  const int flat = g.node_of_unknown[static_cast<std::size_t>(u)];
  const int i = flat % g.nx, j = flat / g.nx;
  const auto& arm = g.arms[static_cast<std::size_t>(u)];
  const Real h = g.spacing;

  auto unknown_at = [&](int ii, int jj) -> int {
    if (!g.is_inside(ii, jj)) return -1;
    return g.unknown_index[static_cast<std::size_t>(g.flat(ii, jj))];
  };
  const int uW = unknown_at(i - 1, j), uE = unknown_at(i + 1, j);
  const int uS = unknown_at(i, j - 1), uN = unknown_at(i, j + 1);

  const AxisWeights wx = axis_weights(arm[kW], arm[kE]);
  const AxisWeights wy = axis_weights(arm[kS], arm[kN]);

  auto& self = ctx.stencil.at(u);
  self.cx += wx.d1_c;
  self.cxx += wx.d2_c;
  self.cy += wy.d1_c;
  self.cyy += wy.d2_c;
  if (uW >= 0) {
    auto& e = ctx.stencil.at(uW);
    e.cx += wx.d1_m;
    e.cxx += wx.d2_m;
  }
  if (uE >= 0) {
    auto& e = ctx.stencil.at(uE);
    e.cx += wx.d1_p;
    e.cxx += wx.d2_p;
  }
  if (uS >= 0) {
    auto& e = ctx.stencil.at(uS);
    e.cy += wy.d1_m;
    e.cyy += wy.d2_m;
  }
  if (uN >= 0) {
    auto& e = ctx.stencil.at(uN);
    e.cy += wy.d1_p;
    e.cyy += wy.d2_p;
  }

  // mixed derivative: centered four-corner cross when available, otherwise a
  // one-sided corner difference toward the domain interior, otherwise absent
  const int uNE = unknown_at(i + 1, j + 1), uNW = unknown_at(i - 1, j + 1);
  const int uSE = unknown_at(i + 1, j - 1), uSW = unknown_at(i - 1, j - 1);
  if (uNE >= 0 && uNW >= 0 && uSE >= 0 && uSW >= 0) {
    const Real c = 1 / (4 * h * h);
    ctx.stencil.at(uNE).cxy += c;
    ctx.stencil.at(uSW).cxy += c;
    ctx.stencil.at(uNW).cxy -= c;
    ctx.stencil.at(uSE).cxy -= c;
  } else {
    const int sx = (uE >= 0) ? 1 : ((uW >= 0) ? -1 : 0);
    const int sy = (uN >= 0) ? 1 : ((uS >= 0) ? -1 : 0);
    const int u_corner = (sx != 0 && sy != 0) ? unknown_at(i + sx, j + sy) : -1;
    if (u_corner >= 0) {
      const Real c = static_cast<Real>(sx * sy) / (h * h);
      ctx.stencil.at(u_corner).cxy += c;
      ctx.stencil.at(u).cxy += c;
      ctx.stencil.at((sx > 0) ? uE : uW).cxy -= c;
      ctx.stencil.at((sy > 0) ? uN : uS).cxy -= c;
    }
  }
  return ctx;
}

struct Derivatives {
  Real wP, wx, wy, wxx, wyy, wxy;
};

Derivatives evaluate(const NodeContext& ctx, const VecX& w) {
  Derivatives d{0, 0, 0, 0, 0, 0};
  for (int k = 0; k < ctx.stencil.count; ++k) {
    const auto& e = ctx.stencil.entries[k];
    const Real v = w[e.unknown];
    d.wx += e.cx * v;
    d.wy += e.cy * v;
    d.wxx += e.cxx * v;
    d.wyy += e.cyy * v;
    d.wxy += e.cxy * v;
  }
  d.wP = w[ctx.self];
  return d;
}

Real residual_of(const Derivatives& d, int n) {
  const Real g2 = d.wx * d.wx + d.wy * d.wy;
  const Real den = 4 * d.wP + g2;
  const Real num = d.wx * d.wx * d.wxx + 2 * d.wx * d.wy * d.wxy + d.wy * d.wy * d.wyy + 2 * g2;
  return d.wxx + d.wyy - num / den + 2 * n;
}

}  // namespace

void SolverConfig::validate() const {
  if (spacing <= 0) throw DomainError("SolverConfig: spacing must be positive");
  if (tolerance <= 0) throw DomainError("SolverConfig: tolerance must be positive");
  if (dimension < 2) throw DomainError("SolverConfig: dimension must be at least 2");
}

GradedGrid build_grid(const ConvexCornerDomain& domain, Real spacing) {
  if (spacing <= 0) throw DomainError("build_grid: spacing must be positive");
  for (const auto& arc : domain.arcs()) {
    const Real kappa = arc.max_curvature_sample();
    if (kappa > 0 && spacing > 0.1 / kappa)
      throw DomainError("build_grid: spacing too coarse for the boundary feature size");
  }
  GradedGrid g;
  g.domain = std::make_shared<ConvexCornerDomain>(domain);
  g.spacing = spacing;
  const auto box = domain.bounding_box();
  // snap to the global lattice {spacing * Z^2} so grids of different domains
  // at the same spacing share node positions
  g.origin = spacing * Vec2(std::floor(box.min().x() / spacing) - 2,
                            std::floor(box.min().y() / spacing) - 2);
  g.nx = static_cast<int>(std::ceil((box.max().x() - g.origin.x()) / spacing)) + 3;
  g.ny = static_cast<int>(std::ceil((box.max().y() - g.origin.y()) / spacing)) + 3;
  const std::size_t total = static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
  g.kind.assign(total, NodeKind::Exterior);
  g.unknown_index.assign(total, -1);

  std::vector<Real> signed_dist(total);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(g.flat(i, j));
      signed_dist[idx] = domain.signed_boundary_function(g.position(g.flat(i, j)));
      if (signed_dist[idx] > 1e-10 * spacing) g.kind[idx] = NodeKind::Interior;
    }
  }
  // cut nodes: inside with at least one exterior axis neighbor
  auto inside = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < g.nx && j < g.ny &&
           g.kind[static_cast<std::size_t>(g.flat(i, j))] != NodeKind::Exterior;
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(g.flat(i, j));
      if (g.kind[idx] == NodeKind::Exterior) continue;
      if (!inside(i - 1, j) || !inside(i + 1, j) || !inside(i, j - 1) || !inside(i, j + 1))
        g.kind[idx] = NodeKind::Cut;
    }

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(g.flat(i, j));
      if (g.kind[idx] == NodeKind::Exterior) continue;
      g.unknown_index[idx] = static_cast<int>(g.node_of_unknown.size());
      g.node_of_unknown.push_back(g.flat(i, j));
    }

  const int n_unknown = g.unknown_count();
  g.arms.resize(static_cast<std::size_t>(n_unknown));
  g.distance.resize(static_cast<std::size_t>(n_unknown));
  g.foot_curvature.resize(static_cast<std::size_t>(n_unknown));
  const std::array<std::pair<int, int>, 4> dirs{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
  for (int u = 0; u < n_unknown; ++u) {
    const int flat = g.node_of_unknown[static_cast<std::size_t>(u)];
    const int i = flat % g.nx, j = flat / g.nx;
    const Vec2 p = g.position(flat);
    g.distance[static_cast<std::size_t>(u)] = domain.boundary_distance(p);
    g.foot_curvature[static_cast<std::size_t>(u)] = domain.curvature_at_foot(p);
    for (int dir = 0; dir < 4; ++dir) {
      const auto [di, dj] = dirs[static_cast<std::size_t>(dir)];
      if (inside(i + di, j + dj)) {
        g.arms[static_cast<std::size_t>(u)][dir] = spacing;
        continue;
      }
      // boundary crossing between p and the exterior neighbor
      const Vec2 dirv(di, dj);
      const auto fval = [&](Real t) { return domain.signed_boundary_function(p + t * dirv); };
      const Real f0 = signed_dist[static_cast<std::size_t>(flat)];
      Real f1 = fval(spacing);
      Real arm;
      if (f1 >= 0) {
        arm = spacing;  // neighbor was culled by the classification margin
      } else {
        arm = brent_root(fval, 0, spacing, f0, f1, 1e-12 * spacing);
      }
      g.arms[static_cast<std::size_t>(u)][dir] = std::clamp(arm, 1e-6 * spacing, spacing);
    }
  }
  return g;
}

VecX w_form_residual(const GradedGrid& g, const VecX& w, int dimension) {
  VecX r(g.unknown_count());
  parallel_for(g.unknown_count(), [&](int u) {
    const NodeContext ctx = node_context(g, u);
    r[u] = residual_of(evaluate(ctx, w), dimension);
  });
  return r;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<Real>>;

void assemble_triplets(const GradedGrid& g, const VecX& w, int n, VecX& residual, Triplets& trip) {
  residual.resize(g.unknown_count());
  trip.clear();
  for (int u = 0; u < g.unknown_count(); ++u) {
    const NodeContext ctx = node_context(g, u);
    const Derivatives d = evaluate(ctx, w);
    const Real g2 = d.wx * d.wx + d.wy * d.wy;
    const Real den = 4 * d.wP + g2;
    const Real num = d.wx * d.wx * d.wxx + 2 * d.wx * d.wy * d.wxy + d.wy * d.wy * d.wyy + 2 * g2;
    residual[u] = d.wxx + d.wyy - num / den + 2 * n;

    const Real dF_dxx = 1 - d.wx * d.wx / den;
    const Real dF_dyy = 1 - d.wy * d.wy / den;
    const Real dF_dxy = -2 * d.wx * d.wy / den;
    const Real dnum_dx = 2 * d.wx * d.wxx + 2 * d.wy * d.wxy + 4 * d.wx;
    const Real dnum_dy = 2 * d.wy * d.wyy + 2 * d.wx * d.wxy + 4 * d.wy;
    const Real dF_dx = -dnum_dx / den + num * 2 * d.wx / (den * den);
    const Real dF_dy = -dnum_dy / den + num * 2 * d.wy / (den * den);
    const Real dF_dP = 4 * num / (den * den);

    for (int k = 0; k < ctx.stencil.count; ++k) {
      const auto& e = ctx.stencil.entries[k];
      Real jac = dF_dxx * e.cxx + dF_dyy * e.cyy + dF_dxy * e.cxy + dF_dx * e.cx + dF_dy * e.cy;
      if (e.unknown == u) jac += dF_dP;
      trip.emplace_back(u, e.unknown, jac);
    }
  }
}

VecX initial_guess(const GradedGrid& g) {
  const int n = g.unknown_count();
  Real inradius = 0;
  for (int u = 0; u < n; ++u) inradius = std::max(inradius, g.distance[static_cast<std::size_t>(u)]);
  VecX w(n);
  for (int u = 0; u < n; ++u) {
    const Real d = g.distance[static_cast<std::size_t>(u)];
    const Real kappa = std::max(g.foot_curvature[static_cast<std::size_t>(u)], 1e-12);
    const Real slope_guess = 2 * d / kappa;                   // w ~ 2 d / H near the boundary
    const Real cap_guess = d * (2 * inradius - d);            // hemisphere over the inscribed disk
    w[u] = std::max(std::min(slope_guess, cap_guess), 1e-30);
  }
  return w;
}

}  // namespace

void assemble_w_system(const GradedGrid& grid, const VecX& w, int dimension, VecX& residual,
                       Eigen::SparseMatrix<Real>& jacobian) {
  Triplets trip;
  assemble_triplets(grid, w, dimension, residual, trip);
  jacobian.resize(grid.unknown_count(), grid.unknown_count());
  jacobian.setFromTriplets(trip.begin(), trip.end());
}

ScalarField solve_on_grid(std::shared_ptr<const GradedGrid> grid, const SolverConfig& config) {
  config.validate();
  const GradedGrid& g = *grid;
  const int n_unknown = g.unknown_count();
  if (n_unknown == 0) throw DomainError("solve: grid has no unknowns");

  ScalarField field;
  field.grid = grid;
  field.dimension = config.dimension;

  VecX w = initial_guess(g);
  VecX residual;
  Triplets trip;
  Eigen::SparseMatrix<Real> jac(n_unknown, n_unknown);
  Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu;
  bool pattern_analyzed = false;

  // Positivity floors for the continuation stages, ending with 0. The floor
  // is capped per node by a fraction of the initial profile so it never
  // pushes near-boundary nodes above their natural scale.
  std::vector<Real> floors;
  Real eps = config.continuation_floor;
  for (int s = 0; s < config.continuation_stages; ++s, eps *= config.continuation_decay)
    floors.push_back(eps);
  floors.push_back(0.0);
  const VecX node_cap = 0.25 * w;

  const auto clamp_floor = [&](VecX& v, Real floor_eps) {
    bool positive = true;
    for (int u = 0; u < n_unknown; ++u) {
      const Real fl = std::min(floor_eps * floor_eps, node_cap[u]);
      if (v[u] < fl) v[u] = fl;
      if (v[u] <= 0) positive = false;
    }
    return positive;
  };

  int total_iterations = 0;
  for (std::size_t stage = 0; stage < floors.size(); ++stage) {
    const Real floor_eps = floors[stage];
    const bool final_stage = (stage + 1 == floors.size());
    for (int it = 0;; ++it) {
      assemble_triplets(g, w, config.dimension, residual, trip);
      const Real rnorm = residual.lpNorm<Eigen::Infinity>();
      field.residual_trace.push_back(rnorm);
      if (rnorm < config.tolerance) break;
      if (!final_stage && it >= 8) break;  // hand over to the next floor
      if (total_iterations++ > config.max_newton_iterations)
        throw NumericalError("solve: Newton did not converge; last residual " +
                             std::to_string(rnorm));

      jac.setFromTriplets(trip.begin(), trip.end());
      if (!pattern_analyzed) {
        lu.analyzePattern(jac);
        pattern_analyzed = true;
      }
      lu.factorize(jac);
      if (lu.info() != Eigen::Success)
        throw NumericalError("solve: sparse factorization failed");
      const VecX dw = lu.solve(-residual);

      Real lambda = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < config.max_line_search_steps; ++ls, lambda *= 0.5) {
        VecX w_try = w + lambda * dw;
        if (!clamp_floor(w_try, floor_eps)) continue;
        const VecX r_try = w_form_residual(g, w_try, config.dimension);
        const Real rn = r_try.lpNorm<Eigen::Infinity>();
        if (rn < rnorm * (1 - 1e-4 * lambda) || rn < config.tolerance) {
          w = std::move(w_try);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (final_stage)
          throw NumericalError(
              "solve: line search failed (negative w or stalled residual) at residual " +
              std::to_string(rnorm));
        break;  // tighten the floor and retry
      }
      if (final_stage) {
        // energy along accepted steps, recorded over the fixed window
        ScalarField snapshot;
        snapshot.grid = grid;
        snapshot.dimension = config.dimension;
        snapshot.w = w;
        snapshot.f = w.cwiseMax(0.0).cwiseSqrt();
        field.energy_trace.push_back(energy(snapshot));
      }
    }
  }

  field.w = w;
  field.f = w.cwiseMax(0.0).cwiseSqrt();
  field.newton_iterations = total_iterations;
  field.final_residual = w_form_residual(g, w, config.dimension).lpNorm<Eigen::Infinity>();
  return field;
}

ScalarField solve(const ConvexCornerDomain& domain, const SolverConfig& config) {
  auto grid = std::make_shared<GradedGrid>(build_grid(domain, config.spacing));
  return solve_on_grid(grid, config);
}

ScalarField inject_field(std::shared_ptr<const GradedGrid> grid,
                         const std::function<Real(const Vec2&)>& w_exact, int dimension) {
  ScalarField field;
  field.grid = grid;
  field.dimension = dimension;
  field.w.resize(grid->unknown_count());
  for (int u = 0; u < grid->unknown_count(); ++u)
    field.w[u] = w_exact(grid->position(grid->node_of_unknown[static_cast<std::size_t>(u)]));
  field.f = field.w.cwiseMax(0.0).cwiseSqrt();
  return field;
}

Real ScalarField::value_at_node(int flat_index) const {
  const int u = grid->unknown_index.at(static_cast<std::size_t>(flat_index));
  if (u < 0) throw DomainError("value_at_node: exterior node");
  return f[u];
}

ResidualReport pde_residual(const ScalarField& field) {
  const GradedGrid& g = *field.grid;
  ResidualReport rep;
  const VecX rw = w_form_residual(g, field.w, field.dimension);
  rep.w_form_max = rw.lpNorm<Eigen::Infinity>();

  // f-form residual with the same stencils on f = sqrt(w)
  for (int u = 0; u < g.unknown_count(); ++u) {
    const NodeContext ctx = node_context(g, u);
    Derivatives d{0, 0, 0, 0, 0, 0};
    for (int k = 0; k < ctx.stencil.count; ++k) {
      const auto& e = ctx.stencil.entries[k];
      const Real v = field.f[e.unknown];
      d.wx += e.cx * v;
      d.wy += e.cy * v;
      d.wxx += e.cxx * v;
      d.wyy += e.cyy * v;
      d.wxy += e.cxy * v;
    }
    const Real fP = field.f[u];
    if (fP <= 0) continue;
    const Real g2 = d.wx * d.wx + d.wy * d.wy;
    const Real quad =
        (d.wx * d.wx * d.wxx + 2 * d.wx * d.wy * d.wxy + d.wy * d.wy * d.wyy) / (1 + g2);
    const Real rf = d.wxx + d.wyy - quad + field.dimension / fP;
    rep.f_form_weighted_max = std::max(rep.f_form_weighted_max, std::abs(fP * rf));
    if (g.distance[static_cast<std::size_t>(u)] > 10 * g.spacing)
      rep.f_form_window_max = std::max(rep.f_form_window_max, std::abs(rf));
  }
  return rep;
}

Real energy(const ScalarField& field, Real window) {
  const GradedGrid& g = *field.grid;
  const Real h = g.spacing;
  if (window <= 0) window = 5 * h;
  const int n = field.dimension;
  Real total = 0;
  bool any = false;
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int f00 = g.flat(i, j), f10 = g.flat(i + 1, j), f01 = g.flat(i, j + 1),
                f11 = g.flat(i + 1, j + 1);
      const int u00 = g.unknown_index[static_cast<std::size_t>(f00)];
      const int u10 = g.unknown_index[static_cast<std::size_t>(f10)];
      const int u01 = g.unknown_index[static_cast<std::size_t>(f01)];
      const int u11 = g.unknown_index[static_cast<std::size_t>(f11)];
      if (u00 < 0 || u10 < 0 || u01 < 0 || u11 < 0) continue;
      const Real dmin = std::min(std::min(g.distance[static_cast<std::size_t>(u00)],
                                          g.distance[static_cast<std::size_t>(u10)]),
                                 std::min(g.distance[static_cast<std::size_t>(u01)],
                                          g.distance[static_cast<std::size_t>(u11)]));
      const Real dmax = std::max(std::max(g.distance[static_cast<std::size_t>(u00)],
                                          g.distance[static_cast<std::size_t>(u10)]),
                                 std::max(g.distance[static_cast<std::size_t>(u01)],
                                          g.distance[static_cast<std::size_t>(u11)]));
      // fractional weight at the window edge keeps the truncated integral
      // stable under refinement with the window held fixed
      Real weight = 1;
      if (dmax <= window) continue;
      if (dmin <= window) weight = (dmax - window) / (dmax - dmin);
      const Real fc =
          0.25 * (field.f[u00] + field.f[u10] + field.f[u01] + field.f[u11]);
      if (fc <= 0) throw NumericalError("energy: nonpositive f inside the window");
      const Real fx = (field.f[u10] + field.f[u11] - field.f[u00] - field.f[u01]) / (2 * h);
      const Real fy = (field.f[u01] + field.f[u11] - field.f[u00] - field.f[u10]) / (2 * h);
      total += weight * std::pow(fc, -n) * std::sqrt(1 + fx * fx + fy * fy) * h * h;
      any = true;
    }
  }
  if (!any) throw DomainError("energy: no cells inside the truncation window");
  return total;
}

}  // namespace hypgraph
