#pragma once

// Reproduction of the boundary estimates as measurable decays: the smooth
// expansion sqrt(H/(2d)) f -> 1, the cone growth f ~ |x - x0| h(theta), the
// localization of corner expansions, and the corner estimate against the
// tangent-ball lens model. Deviations are measured as sups over dyadic
// annuli and the decay exponent is fitted in log-log coordinates.

#include "hypgraph/cone_solver.hpp"
#include "hypgraph/graph_solver.hpp"
#include "hypgraph/model_solution.hpp"
#include "hypgraph/numerics.hpp"
#include "hypgraph/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypgraph {

struct AnnulusStat {
  Real r_outer = 0;
  Real r_inner = 0;
  Real sup = 0;
  int count = 0;
};

struct AsymptoticsReport {
  std::string case_name;
  std::vector<AnnulusStat> annuli;  // outermost first (radii strictly decreasing)
  Real fitted_exponent = 0;
  Real fit_rms = 0;
  bool decay_pass = false;  // sups decrease monotonically over usable levels
  bool pass = false;
  std::string detail;  // provenance: domain, spacing, tolerances
  Real max_usable_radius = 0;

  /// Levels with enough samples and (when a floor is given) clear of it.
  std::vector<std::size_t> usable_levels(const std::vector<Real>& floor = {},
                                         Real floor_factor = 3.0) const;
};

/// Eq. sqrt(H/(2d)) f - 1 decay, banded dyadically in the boundary distance.
/// d0 <= 0 picks half the maximal inradius. The report's annuli carry the
/// band's upper distance as r_outer.
AsymptoticsReport check_smooth_expansion(const ScalarField& field, Real d0 = 0, int levels = 4,
                                         int min_count = 50);

/// f / (|x - x0| h(theta)) - 1 over {d >= |x - x0|^{3/2}} in dyadic annuli
/// around the corner vertex. one_sided_margin receives the worst violation of
/// the upper bound f <= |x - x0| h(theta).
AsymptoticsReport check_cone_growth(const ScalarField& field, const ConeSolutionTable& table,
                                    int corner_index, Real r0 = 0, int levels = 5,
                                    int min_count = 50, Real* one_sided_margin = nullptr);

/// |f - f*| / f on shared lattice nodes near a corner both domains share.
AsymptoticsReport check_localization(const ScalarField& field, const ScalarField& field_star,
                                     const Vec2& x0, Real r0, int levels = 5, int min_count = 50);

/// |f / model(T x) - 1| with T the distance-matching corner chart.
/// floor_per_annulus (from the lens-vs-model trivial run) gates which levels
/// must decay; empty means all usable levels.
AsymptoticsReport check_corner_estimate(const ScalarField& field, int corner_index,
                                        const LensModel& model,
                                        const std::vector<Real>& floor_per_annulus = {},
                                        Real r0 = 0, int levels = 5, int min_count = 50);

struct PropertyResult {
  std::string name;
  bool pass = false;
  Vec2 witness{0, 0};
  Real margin = 0;  // how far inside (positive) or outside (negative) the bound
  std::string detail;
};

struct PropertySuiteInput {
  const ScalarField* primary = nullptr;        // Hoelder + concavity
  const ScalarField* larger_domain = nullptr;  // inclusion: primary domain inside this one
  const ScalarField* scaled = nullptr;         // scaling pair
  Real scale_factor = 1;
  Real concavity_tol = 2e-3;
  Real comparison_tol = 1e-6;
  int holder_samples = 300;
  unsigned seed = 0;
};

std::vector<PropertyResult> property_suite(const PropertySuiteInput& input);

/// OLS exponent of sup ~ C r^beta over the given levels.
LineFit fit_decay_exponent(const std::vector<AnnulusStat>& annuli,
                           const std::vector<std::size_t>& levels);

}  // namespace hypgraph
