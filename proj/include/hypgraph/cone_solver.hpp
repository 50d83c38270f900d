#pragma once

// Self-similar solutions over infinite cones. The graph function on the cone
// of opening mu*pi is r h(theta), where h solves the singular two-point
// problem
//
//   h'' h + h'' h^3 + 3 h^2 + h^4 + 2 + 2 h'^2 = 0   on (0, mu*pi),
//   h(0) = h(mu*pi) = 0,  h > 0 inside.
//
// The solver works in the regularized variable H = h^3, which is
// asymptotically linear at the endpoints (H ~ theta / a_mu), and shoots from
// the midpoint using the symmetry of the problem. The corner coefficient
// a_mu = 1 / H'(0+).

#include "hypgraph/types.hpp"

#include <vector>

namespace hypgraph {

struct ConeSolutionTable {
  Real mu = 0;
  std::vector<Real> theta;    // graded toward both endpoints, ascending in (0, mu*pi)
  std::vector<Real> h;        // profile values
  std::vector<Real> h_prime;
  std::vector<Real> H;        // h^3
  std::vector<Real> H_prime;  // dH/dtheta (3 h^2 h')
  Real a_mu = 0;
  Real a_mu_slope_fit = 0;    // from the theta^{-1/3} h fit (consistency check)

  // diagnostics
  Real residual = 0;          // max interval-midpoint defect of the regularized system
  Real raw_residual = 0;      // profile-equation residual over the interior safe window
  Real symmetry_defect = 0;
  int grid_size = 0;
  Real midpoint_value = 0;    // h(mu*pi/2)

  Real theta_min() const { return theta.front(); }
  /// h'' recovered from the profile equation (exact given h, h').
  Real h_second(std::size_t i) const;
};

/// Solve the profile problem by symmetric shooting; tol controls both the
/// integrator tolerance and the accepted midpoint defect.
ConeSolutionTable solve_cone_profile(Real mu, Real tol = 1e-10, int half_grid_points = 4000);

/// The corner coefficient; re-validates the consistency of the H'(0)
/// extrapolation with the theta^{-1/3} h fit (error if they disagree > 1%).
Real a_mu(const ConeSolutionTable& table);

/// r * h(theta) by monotone cubic interpolation of H with exact nodal slopes;
/// below the resolved window the asymptote h = a_mu^{-1/3} theta^{1/3} is used.
Real eval_cone_solution(const ConeSolutionTable& table, Real r, Real theta);

/// h'(theta); evaluation folds onto the computed half, so the mirrored
/// side agrees up to reflection roundoff.
Real eval_profile_derivative(const ConeSolutionTable& table, Real theta);

/// h(theta) (= eval_cone_solution with r = 1).
Real eval_profile(const ConeSolutionTable& table, Real theta);

}  // namespace hypgraph
