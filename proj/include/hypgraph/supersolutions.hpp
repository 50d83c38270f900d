#pragma once

// Explicit supersolution certificates for the profile operator
//
//   L h = (h'' + h)(1 + h^2) h + 2 (1 + h^2 + h'^2),
//
// built from phi = (sin(theta/mu))^{1/(1+alpha)} and
// psi = (sin(theta/mu))^{1/(1+beta)}, plus the constants b, delta(mu1),
// C_{mu1,mu2} used to compare profiles of nearby openings.

#include "hypgraph/cone_solver.hpp"
#include "hypgraph/types.hpp"

#include <vector>

namespace hypgraph {

struct SupersolutionCertificate {
  Real mu = 0;
  Real alpha = 2;
  Real beta = 0;   // only meaningful when B > 0
  Real A = 0;
  Real B = 0;
  std::vector<Real> theta;     // verification grid
  std::vector<Real> L_values;  // L(A phi + B psi) at the grid
  Real max_L = 0;

  /// A phi + B psi at theta.
  Real value(Real theta) const;
  /// Re-verify nonpositivity on a grid refined by `factor`.
  bool verify(int factor = 4, Real slack = 1e-9) const;
};

/// Pointwise L given sampled h, h', h''.
std::vector<Real> eval_L(Real mu, const std::vector<Real>& h, const std::vector<Real>& h_prime,
                         const std::vector<Real>& h_second);

/// The mu <= 1/3 branch: alpha = 2, A = sqrt(3 mu), B = 0.
SupersolutionCertificate certificate_small_mu(Real mu, int grid_points = 10000);

/// The mu > 1/3 branch: alpha = 3, beta = min((1/mu - 1)/2, 1/100); the
/// amplitude ratio C (B = C A) and then A are found by doubling searches
/// verified on the grid.
SupersolutionCertificate certificate_large_mu(Real mu, int grid_points = 10000);

/// Dispatch on mu.
SupersolutionCertificate supersolution_certificate(Real mu, int grid_points = 10000);

struct ComparisonConstants {
  Real mu1 = 0;
  Real b = 0;
  Real delta = 0;
  Real mu2 = 0;
  Real C = 0;
};

/// b_{mu1}, delta(mu1) and C_{mu1,mu2}; sups are taken over the table grid
/// refined 4x near the endpoints. mu2 must lie in (mu1, mu1 + delta).
ComparisonConstants comparison_constants(const ConeSolutionTable& table1, Real mu2);

/// b_{mu1} and delta(mu1) alone (no mu2 admissibility check).
ComparisonConstants comparison_base_constants(const ConeSolutionTable& table1);

}  // namespace hypgraph
