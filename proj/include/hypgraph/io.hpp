#pragma once

// Serialization: domain description files (JSON), field and profile tables
// (CSV), reports and manifests (JSON), and small SVG plots. All numeric
// output is formatted with 17 significant digits so identical runs produce
// byte-identical artifacts; files are written atomically (temp + rename).

#include "hypgraph/geometry.hpp"
#include "hypgraph/graph_solver.hpp"
#include "hypgraph/verification.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <string>

namespace hypgraph {

/// %.17g rendering used in every CSV/JSON artifact.
std::string format_real(Real v);

void atomic_write(const std::filesystem::path& path, const std::string& content);

ConvexCornerDomain load_domain(const std::filesystem::path& path);
ConvexCornerDomain parse_domain(const nlohmann::json& doc);
nlohmann::json domain_to_json(const ConvexCornerDomain& domain);

std::string field_csv(const ScalarField& field);
std::string cone_table_csv(const ConeSolutionTable& table);
std::string annuli_csv(const AsymptoticsReport& report);

nlohmann::json report_to_json(const AsymptoticsReport& report);

/// Contour plot of f over the domain (marching squares at fixed levels).
std::string field_contour_svg(const ScalarField& field, int contour_levels = 10);
/// Log-log decay plot with the fitted line.
std::string report_svg(const AsymptoticsReport& report);

}  // namespace hypgraph
