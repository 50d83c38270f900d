#include "hypgraph/supersolutions.hpp"

#include <algorithm>
#include <cmath>

namespace hypgraph {

namespace {

// phi = (sin(theta/mu))^{1/(1+alpha)} with exact first and second derivatives:
//   phi'  = phi^{-alpha} cos(theta/mu) / (mu (1+alpha))
//   phi'' = -(phi + alpha phi^{-1-2 alpha}) / (mu^2 (1+alpha)^2)
struct PowerSine {
  Real mu, alpha;
  void eval(Real theta, Real& v, Real& d1, Real& d2) const {
    const Real s = std::sin(theta / mu);
    const Real q = 1.0 / (1.0 + alpha);
    v = std::pow(s, q);
    d1 = std::pow(v, -alpha) * std::cos(theta / mu) * q / mu;
    d2 = -(v + alpha * std::pow(v, -1 - 2 * alpha)) * q * q / (mu * mu);
  }
};

Real L_of(Real h, Real hp, Real hpp) {
  return (hpp + h) * (1 + h * h) * h + 2 * (1 + h * h + hp * hp);
}

std::vector<Real> certificate_grid(Real mu, int n) {
  // graded toward both endpoints: x - sin(2 pi x)/(2 pi) clusters cubically
  std::vector<Real> g;
  g.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) {
    const Real x = static_cast<Real>(i) / n;
    const Real s = x - std::sin(2 * kPi * x) / (2 * kPi);
    if (s > 0 && s < 1) g.push_back(mu * kPi * s);
  }
  return g;
}

void eval_certificate(SupersolutionCertificate& cert, const std::vector<Real>& grid) {
  const PowerSine phi{cert.mu, cert.alpha};
  const PowerSine psi{cert.mu, cert.beta};
  cert.theta = grid;
  cert.L_values.resize(grid.size());
  cert.max_L = -std::numeric_limits<Real>::max();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Real pv, pd1, pd2, qv = 0, qd1 = 0, qd2 = 0;
    phi.eval(grid[i], pv, pd1, pd2);
    if (cert.B > 0) psi.eval(grid[i], qv, qd1, qd2);
    const Real h = cert.A * pv + cert.B * qv;
    const Real hp = cert.A * pd1 + cert.B * qd1;
    const Real hpp = cert.A * pd2 + cert.B * qd2;
    cert.L_values[i] = L_of(h, hp, hpp);
    cert.max_L = std::max(cert.max_L, cert.L_values[i]);
  }
}

}  // namespace

Real SupersolutionCertificate::value(Real t) const {
  const PowerSine phi{mu, alpha};
  Real pv, pd1, pd2;
  phi.eval(t, pv, pd1, pd2);
  Real qv = 0;
  if (B > 0) {
    const PowerSine psi{mu, beta};
    Real qd1, qd2;
    psi.eval(t, qv, qd1, qd2);
  }
  return A * pv + B * qv;
}

bool SupersolutionCertificate::verify(int factor, Real slack) const {
  SupersolutionCertificate fine = *this;
  eval_certificate(fine, certificate_grid(mu, static_cast<int>(theta.size() + 1) * factor));
  return fine.max_L <= slack;
}

std::vector<Real> eval_L(Real mu, const std::vector<Real>& h, const std::vector<Real>& h_prime,
                         const std::vector<Real>& h_second) {
  if (!(mu > 0 && mu < 1)) throw DomainError("eval_L: mu must lie in (0, 1)");
  if (h.size() != h_prime.size() || h.size() != h_second.size())
    throw DomainError("eval_L: array length mismatch");
  std::vector<Real> out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = L_of(h[i], h_prime[i], h_second[i]);
  return out;
}

SupersolutionCertificate certificate_small_mu(Real mu, int grid_points) {
  if (!(mu > 0 && mu <= 1.0 / 3.0 + 1e-15))
    throw DomainError("certificate_small_mu: requires 0 < mu <= 1/3");
  SupersolutionCertificate cert;
  cert.mu = mu;
  cert.alpha = 2;
  cert.beta = 0;
  cert.A = std::sqrt(3 * mu);
  cert.B = 0;
  eval_certificate(cert, certificate_grid(mu, grid_points));
  if (cert.max_L > 1e-9)
    throw NumericalError("certificate_small_mu: L exceeds 0 on the grid, max " +
                         std::to_string(cert.max_L));
  return cert;
}

SupersolutionCertificate certificate_large_mu(Real mu, int grid_points) {
  if (!(mu > 1.0 / 3.0 && mu < 1)) throw DomainError("certificate_large_mu: requires 1/3 < mu < 1");
  SupersolutionCertificate cert;
  cert.mu = mu;
  cert.alpha = 3;
  cert.beta = std::min(0.5 * (1 / mu - 1), 0.01);

  const std::vector<Real> grid = certificate_grid(mu, grid_points);
  const PowerSine phi{mu, cert.alpha};
  const PowerSine psi{mu, cert.beta};
  const Real ca = 1 / (mu * mu * (1 + cert.alpha) * (1 + cert.alpha));
  const Real cb = 1 / (mu * mu * (1 + cert.beta) * (1 + cert.beta));

  // Stage 1: ratio C such that the bracket of I stays below -eta grid-wide.
  const Real eta = 0.5;
  Real C = 1;
  Real worst_theta = 0;
  for (; C < std::ldexp(1.0, 60); C *= 2) {
    Real worst = -std::numeric_limits<Real>::max();
    for (const Real t : grid) {
      Real pv, pd1, pd2, qv, qd1, qd2;
      phi.eval(t, pv, pd1, pd2);
      psi.eval(t, qv, qd1, qd2);
      const Real term = (1 - ca) * pv - cert.alpha * ca * std::pow(pv, -1 - 2 * cert.alpha) +
                        C * ((1 - cb) * qv - cert.beta * cb * std::pow(qv, -1 - 2 * cert.beta));
      if (term > worst) {
        worst = term;
        worst_theta = t;
      }
    }
    if (worst <= -eta) break;
  }
  if (C >= std::ldexp(1.0, 60))
    throw NumericalError("certificate_large_mu: ratio search exceeded cap at theta = " +
                         std::to_string(worst_theta));

  // Stage 2: amplitude A (with B = C A) until L <= 0 grid-wide.
  for (Real A = 1; A < std::ldexp(1.0, 60); A *= 2) {
    cert.A = A;
    cert.B = C * A;
    eval_certificate(cert, grid);
    if (cert.max_L <= 0) return cert;
  }
  throw NumericalError("certificate_large_mu: amplitude search exceeded cap; worst L = " +
                       std::to_string(cert.max_L));
}

SupersolutionCertificate supersolution_certificate(Real mu, int grid_points) {
  return mu <= 1.0 / 3.0 ? certificate_small_mu(mu, grid_points)
                         : certificate_large_mu(mu, grid_points);
}

ComparisonConstants comparison_base_constants(const ConeSolutionTable& table) {
  ComparisonConstants out;
  out.mu1 = table.mu;
  // sup over the table grid, refined 4x within the endpoint windows
  Real sup_h4 = 0, sup_ratio = 0;
  const Real full = table.mu * kPi;
  auto visit = [&](Real h, Real hp) {
    if (h <= 0) return;
    const Real h2 = h * h;
    // -(h'' h^3 + h^4) = h^2 (2 + 2 h^2 + 2 h'^2) / (1 + h^2), positive for
    // any profile solving the equation
    const Real denom = h2 * (2 + 2 * h2 + 2 * hp * hp) / (1 + h2);
    if (denom <= 0) throw NumericalError("comparison_constants: nonpositive denominator");
    sup_h4 = std::max(sup_h4, h2 * h2);
    sup_ratio = std::max(sup_ratio, (3 * h2 + 2) / denom);
  };
  for (std::size_t i = 0; i < table.theta.size(); ++i) {
    visit(table.h[i], table.h_prime[i]);
    const bool near_end =
        table.theta[i] < 0.02 * full || table.theta[i] > 0.98 * full;
    if (near_end && i + 1 < table.theta.size()) {
      for (int k = 1; k < 4; ++k) {
        const Real t = table.theta[i] + 0.25 * k * (table.theta[i + 1] - table.theta[i]);
        visit(eval_profile(table, t), eval_profile_derivative(table, t));
      }
    }
  }
  out.b = std::max(81.0 / 128.0 * sup_h4, sup_ratio);
  out.delta = (std::sqrt(1 / (8 * out.b) + 1) - 1) * table.mu;
  return out;
}

ComparisonConstants comparison_constants(const ConeSolutionTable& table1, Real mu2) {
  ComparisonConstants out = comparison_base_constants(table1);
  const Real mu1 = out.mu1;
  if (!(mu2 > mu1 && mu2 < mu1 + out.delta))
    throw DomainError("comparison_constants: mu2 outside (mu1, mu1 + delta(mu1))");
  out.mu2 = mu2;
  out.C = std::sqrt(1 + out.b * (mu2 * mu2 - mu1 * mu1) / (mu1 * mu1));
  return out;
}

}  // namespace hypgraph
