#pragma once

// Finite-difference solver for the Dirichlet problem
//
//   Delta f - f_i f_j f_ij / (1 + |grad f|^2) + n / f = 0  in Omega,
//   f = 0 on the boundary, f > 0 inside,
//
// on a cut-cell Cartesian grid. The primary unknown is w = f^2, for which
// the equation takes the singularity-free form
//
//   Delta w - (w_i w_j w_ij + 2 |grad w|^2) / (4 w + |grad w|^2) + 2 n = 0,
//
// with w = 0 on the boundary. Since w grows linearly in the boundary
// distance (f ~ sqrt(2 d / H)), Shortley-Weller one-sided stencils at cut
// nodes keep the truncation controlled. The nonlinear system is solved by
// damped Newton with a decaying positivity floor for continuation; the
// linearized steps use a sparse direct factorization.

#include "hypgraph/geometry.hpp"
#include "hypgraph/types.hpp"

#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace hypgraph {

enum class NodeKind : unsigned char { Exterior = 0, Interior = 1, Cut = 2 };

struct GradedGrid {
  std::shared_ptr<const ConvexCornerDomain> domain;
  Real spacing = 0;
  Vec2 origin{0, 0};  // node (i, j) sits at origin + spacing * (i, j)
  int nx = 0, ny = 0;

  std::vector<NodeKind> kind;          // nx * ny, row-major (i + nx * j)
  std::vector<int> unknown_index;      // -1 for exterior nodes
  std::vector<int> node_of_unknown;    // flat lattice index per unknown
  // per unknown: arm lengths toward W, E, S, N; = spacing except where the
  // neighbor is exterior, then the exact distance to the boundary crossing
  std::vector<std::array<Real, 4>> arms;
  std::vector<Real> distance;          // distance to the boundary
  std::vector<Real> foot_curvature;    // boundary curvature at the nearest foot

  int flat(int i, int j) const { return i + nx * j; }
  Vec2 position(int flat_index) const {
    return origin + spacing * Vec2(flat_index % nx, flat_index / nx);
  }
  int unknown_count() const { return static_cast<int>(node_of_unknown.size()); }
  bool is_inside(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx && j < ny && kind[static_cast<std::size_t>(flat(i, j))] != NodeKind::Exterior;
  }
};

struct SolverConfig {
  Real spacing = 0.02;
  Real tolerance = 1e-10;        // residual max-norm target for the w-form
  int max_newton_iterations = 80;
  int max_line_search_steps = 40;
  // Optional positivity-floor continuation (w >= eps^2, decaying). The
  // default initial profile min(2d/H, hemisphere cap) starts inside the
  // damped-Newton basin, so no floor stages are needed; they remain
  // available for hostile configurations.
  Real continuation_floor = 3e-2;
  Real continuation_decay = 0.1;
  int continuation_stages = 0;
  int dimension = 2;             // the n of the equation

  void validate() const;
};

struct ScalarField {
  std::shared_ptr<const GradedGrid> grid;
  VecX w;  // per unknown
  VecX f;  // sqrt(w)
  int dimension = 2;

  // diagnostics
  int newton_iterations = 0;
  Real final_residual = 0;
  std::vector<Real> residual_trace;
  std::vector<Real> energy_trace;  // accepted steps after continuation

  Real value_at_node(int flat_index) const;
};

struct ResidualReport {
  Real w_form_max = 0;          // over all unknowns
  Real f_form_window_max = 0;   // unweighted, over nodes with d > 10 spacing
  Real f_form_weighted_max = 0; // |f * residual_f| over all unknowns
};

GradedGrid build_grid(const ConvexCornerDomain& domain, Real spacing);

ScalarField solve(const ConvexCornerDomain& domain, const SolverConfig& config);
ScalarField solve_on_grid(std::shared_ptr<const GradedGrid> grid, const SolverConfig& config);

/// Populate a field from a closed-form w(x); used by oracles and consistency
/// checks.
ScalarField inject_field(std::shared_ptr<const GradedGrid> grid,
                         const std::function<Real(const Vec2&)>& w_exact, int dimension = 2);

ResidualReport pde_residual(const ScalarField& field);

/// Truncated hyperbolic area sum_{cells, d > window} f^{-n}
/// sqrt(1 + |grad f|^2) * cell_area; window <= 0 means 5 * spacing.
Real energy(const ScalarField& field, Real window = 0);

/// Residual vector of the w-form equation (one entry per unknown).
VecX w_form_residual(const GradedGrid& grid, const VecX& w, int dimension);

/// Residual and analytic Jacobian of the w-form system.
void assemble_w_system(const GradedGrid& grid, const VecX& w, int dimension, VecX& residual,
                       Eigen::SparseMatrix<Real>& jacobian);

}  // namespace hypgraph
