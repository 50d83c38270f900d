#include "hypgraph/cone_solver.hpp"
#include "hypgraph/geometry.hpp"
#include "hypgraph/graph_solver.hpp"
#include "hypgraph/io.hpp"
#include "hypgraph/model_solution.hpp"
#include "hypgraph/supersolutions.hpp"
#include "hypgraph/verification.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using hypgraph::Real;
using json = nlohmann::json;

constexpr const char* kVersion = "1.0.0";

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void write_manifest(const std::string& prefix, const std::string& subcommand, const json& config,
                    const std::vector<std::string>& outputs, double seconds) {
  json manifest{{"version", kVersion},
                {"subcommand", subcommand},
                {"config", config},
                {"outputs", outputs},
                {"timings", {{"seconds", seconds}}}};
  hypgraph::atomic_write(prefix + ".manifest.json", manifest.dump(2) + "\n");
}

hypgraph::Vec2 parse_pair(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw hypgraph::DomainError(std::string(flag) + ": expected \"a,b\"");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw hypgraph::DomainError(std::string(flag) + ": expected \"a,b\" with numeric entries");
  }
}

int run_cone(Real mu, Real tol, int grid, const std::string& out) {
  Timer timer;
  const auto table = hypgraph::solve_cone_profile(mu, tol, grid);
  hypgraph::atomic_write(out + ".profile.csv", hypgraph::cone_table_csv(table));
  json sidecar{{"mu", table.mu},
               {"a_mu", table.a_mu},
               {"a_mu_slope_fit", table.a_mu_slope_fit},
               {"residual", table.residual},
               {"raw_residual", table.raw_residual},
               {"symmetry_defect", table.symmetry_defect},
               {"grid_size", table.grid_size},
               {"midpoint_value", table.midpoint_value}};
  hypgraph::atomic_write(out + ".json", sidecar.dump(2) + "\n");
  write_manifest(out, "cone", json{{"mu", mu}, {"tol", tol}, {"grid", grid}, {"out", out}},
                 {out + ".profile.csv", out + ".json"}, timer.seconds());
  std::cout << "a_mu = " << hypgraph::format_real(table.a_mu)
            << "  residual = " << hypgraph::format_real(table.residual) << "\n";
  return 0;
}

int run_constants(Real mu1, std::optional<Real> mu2_opt, Real tol, const std::string& out) {
  Timer timer;
  const auto table = hypgraph::solve_cone_profile(mu1, tol);
  auto base = hypgraph::comparison_base_constants(table);
  const Real mu2 = mu2_opt.value_or(mu1 + 0.5 * base.delta);
  const auto constants = hypgraph::comparison_constants(table, mu2);
  json doc{{"mu1", constants.mu1},
           {"b", constants.b},
           {"delta", constants.delta},
           {"mu2", constants.mu2},
           {"C", constants.C}};
  hypgraph::atomic_write(out + ".json", doc.dump(2) + "\n");
  write_manifest(out, "constants",
                 json{{"mu1", mu1}, {"mu2", mu2}, {"tol", tol}, {"out", out}}, {out + ".json"},
                 timer.seconds());
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_solve(const std::string& domain_path, Real spacing, Real tol, const std::string& out,
              bool svg) {
  Timer timer;
  const auto domain = hypgraph::load_domain(domain_path);
  hypgraph::SolverConfig config;
  config.spacing = spacing;
  config.tolerance = tol;
  const auto field = hypgraph::solve(domain, config);
  const auto residuals = hypgraph::pde_residual(field);

  std::vector<std::string> outputs;
  hypgraph::atomic_write(out + ".field.csv", hypgraph::field_csv(field));
  outputs.push_back(out + ".field.csv");
  json diag{{"unknowns", field.grid->unknown_count()},
            {"newton_iterations", field.newton_iterations},
            {"final_residual", field.final_residual},
            {"w_form_residual", residuals.w_form_max},
            {"f_form_window_residual", residuals.f_form_window_max},
            {"f_form_weighted_residual", residuals.f_form_weighted_max},
            {"energy", hypgraph::energy(field)},
            {"config",
             {{"spacing", spacing}, {"tol", tol}, {"domain", domain_path}, {"dimension", config.dimension}}}};
  hypgraph::atomic_write(out + ".diagnostics.json", diag.dump(2) + "\n");
  outputs.push_back(out + ".diagnostics.json");
  if (svg) {
    hypgraph::atomic_write(out + ".svg", hypgraph::field_contour_svg(field));
    outputs.push_back(out + ".svg");
  }
  write_manifest(out, "solve",
                 json{{"domain", domain_path}, {"spacing", spacing}, {"tol", tol}, {"svg", svg},
                      {"out", out}},
                 outputs, timer.seconds());
  std::cout << "solved: " << field.grid->unknown_count() << " unknowns, residual "
            << hypgraph::format_real(field.final_residual) << "\n";
  return 0;
}

int run_model(Real mu, Real kappa1, Real kappa2, const std::string& point_text,
              const std::string& dist_text, Real tol, const std::string& out) {
  Timer timer;
  const auto lens = hypgraph::LensDomain::canonical(mu, kappa1, kappa2);
  const auto model = hypgraph::build_lens_model(lens, tol);
  json input{{"mu", mu}, {"kappa1", kappa1}, {"kappa2", kappa2}};
  Real height = 0;
  if (!point_text.empty()) {
    const auto p = parse_pair(point_text, "--point");
    input["point"] = {p.x(), p.y()};
    height = hypgraph::model_height(model, p);
  } else {
    const auto d = parse_pair(dist_text, "--distances");
    input["distances"] = {d.x(), d.y()};
    height = hypgraph::model_height_from_distances(model, d.x(), d.y());
  }
  json doc{{"input", input},
           {"height", height},
           {"residual",
            {{"ray_angle_defect", model.ray_angle_defect},
             {"ray_line_residual", model.ray_line_residual},
             {"cone_residual", model.cone_table->residual}}}};
  std::cout << doc.dump(2) << "\n";
  if (!out.empty()) {
    hypgraph::atomic_write(out + ".json", doc.dump(2) + "\n");
    write_manifest(out, "model",
                   json{{"mu", mu},
                        {"kappa1", kappa1},
                        {"kappa2", kappa2},
                        {"point", point_text},
                        {"distances", dist_text},
                        {"tol", tol},
                        {"out", out}},
                   {out + ".json"}, timer.seconds());
  }
  return 0;
}

int run_verify(const std::string& case_name, const std::string& domain_path,
               const std::string& domain2_path, Real spacing, Real tol, const std::string& out,
               bool svg, unsigned seed) {
  Timer timer;
  const auto domain = hypgraph::load_domain(domain_path);
  hypgraph::SolverConfig config;
  config.spacing = spacing;
  config.tolerance = tol;

  std::vector<std::string> outputs;
  json result;
  auto emit_report = [&](const hypgraph::AsymptoticsReport& rep) {
    hypgraph::atomic_write(out + ".report.json", hypgraph::report_to_json(rep).dump(2) + "\n");
    outputs.push_back(out + ".report.json");
    hypgraph::atomic_write(out + ".annuli.csv", hypgraph::annuli_csv(rep));
    outputs.push_back(out + ".annuli.csv");
    if (svg) {
      hypgraph::atomic_write(out + ".svg", hypgraph::report_svg(rep));
      outputs.push_back(out + ".svg");
    }
    result = hypgraph::report_to_json(rep);
    return rep.pass;
  };

  bool pass = false;
  if (case_name == "smooth") {
    const auto field = hypgraph::solve(domain, config);
    pass = emit_report(hypgraph::check_smooth_expansion(field));
  } else if (case_name == "cone") {
    if (domain.corners().empty()) throw hypgraph::DomainError("verify cone: domain has no corner");
    const auto field = hypgraph::solve(domain, config);
    const auto table = hypgraph::solve_cone_profile(domain.corners()[0].mu, 1e-10);
    pass = emit_report(hypgraph::check_cone_growth(field, table, 0));
  } else if (case_name == "localization") {
    if (domain2_path.empty())
      throw hypgraph::DomainError("verify localization: --domain2 is required");
    const auto domain2 = hypgraph::load_domain(domain2_path);
    if (domain.corners().empty())
      throw hypgraph::DomainError("verify localization: domain has no corner");
    const auto field = hypgraph::solve(domain, config);
    const auto field2 = hypgraph::solve(domain2, config);
    const hypgraph::Vec2 x0 = domain.corners()[0].vertex;
    const Real r0 =
        0.5 * hypgraph::LensDomain::from_corner(domain.corners()[0]).chart_radius();
    pass = emit_report(hypgraph::check_localization(field, field2, x0, r0));
  } else if (case_name == "corner") {
    if (domain.corners().empty())
      throw hypgraph::DomainError("verify corner: domain has no corner");
    const auto field = hypgraph::solve(domain, config);
    const auto lens = hypgraph::LensDomain::from_corner(domain.corners()[0]);
    const auto model = hypgraph::build_lens_model(lens, 1e-10);
    pass = emit_report(hypgraph::check_corner_estimate(field, 0, model));
  } else if (case_name == "properties") {
    const auto field = hypgraph::solve(domain, config);
    hypgraph::PropertySuiteInput input;
    input.primary = &field;
    input.seed = seed;
    std::optional<hypgraph::ScalarField> field2;
    if (!domain2_path.empty()) {
      field2 = hypgraph::solve(hypgraph::load_domain(domain2_path), config);
      input.larger_domain = &*field2;
    }
    const auto results = hypgraph::property_suite(input);
    pass = true;
    json props = json::array();
    for (const auto& r : results) {
      pass = pass && r.pass;
      props.push_back({{"name", r.name},
                       {"pass", r.pass},
                       {"margin", r.margin},
                       {"witness", {r.witness.x(), r.witness.y()}}});
    }
    result = json{{"case", "properties"}, {"pass", pass}, {"properties", props}};
    hypgraph::atomic_write(out + ".report.json", result.dump(2) + "\n");
    outputs.push_back(out + ".report.json");
  } else {
    throw hypgraph::DomainError("verify: unknown case \"" + case_name +
                                "\" (expected smooth, cone, localization, corner, properties)");
  }

  write_manifest(out, "verify",
                 json{{"case", case_name},
                      {"domain", domain_path},
                      {"domain2", domain2_path},
                      {"spacing", spacing},
                      {"tol", tol},
                      {"svg", svg},
                      {"seed", seed},
                      {"out", out}},
                 outputs, timer.seconds());
  std::cout << result.dump(2) << "\n";
  if (!pass) throw hypgraph::NumericalError("verify: case \"" + case_name + "\" failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet problem for minimal graphs in hyperbolic half-space: "
               "cone profiles, lens models, cut-cell solves, and asymptotics checks"};
  app.require_subcommand(1);

  // cone
  Real mu = 0.5, tol = 1e-10;
  int grid = 4000;
  std::string out;
  auto* cone = app.add_subcommand("cone", "solve the cone profile ODE and report a_mu");
  cone->add_option("--mu", mu, "cone opening / pi")->required()->check(CLI::Range(1e-6, 0.999999));
  cone->add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
  cone->add_option("--grid", grid, "half-grid points")->check(CLI::Range(100, 100000));
  cone->add_option("--out", out, "output prefix")->required();

  // constants
  Real mu1 = 0.4;
  std::optional<Real> mu2;
  std::string const_out;
  Real const_tol = 1e-10;
  auto* constants = app.add_subcommand("constants", "comparison constants b, delta, C");
  constants->add_option("--mu1", mu1, "first opening")->required()->check(CLI::Range(1e-6, 0.999999));
  constants->add_option("--mu2", mu2, "second opening (default mu1 + delta/2)")
      ->check(CLI::Range(1e-6, 0.999999));
  constants->add_option("--tol", const_tol, "cone solver tolerance")->check(CLI::PositiveNumber);
  constants->add_option("--out", const_out, "output prefix")->required();

  // solve
  std::string domain_path, solve_out;
  Real spacing = 0.02, solve_tol = 1e-10;
  bool svg = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve the Dirichlet problem on a domain file");
  solve_cmd->add_option("--domain", domain_path, "domain JSON file")->required();
  solve_cmd->add_option("--spacing", spacing, "grid spacing")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tol", solve_tol, "residual tolerance")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out", solve_out, "output prefix")->required();
  solve_cmd->add_flag("--svg", svg, "write a contour plot");

  // model
  Real m_mu = 0.5, kappa1 = 1, kappa2 = 1, model_tol = 1e-10;
  std::string point_text, dist_text, model_out;
  auto* model = app.add_subcommand("model", "evaluate the lens model solution");
  model->add_option("--mu", m_mu, "corner opening / pi")->required()->check(CLI::Range(1e-6, 0.999999));
  model->add_option("--kappa1", kappa1, "curvature of sigma_1")->required()->check(CLI::PositiveNumber);
  model->add_option("--kappa2", kappa2, "curvature of sigma_2")->required()->check(CLI::PositiveNumber);
  auto* point_opt = model->add_option("--point", point_text, "evaluation point x,y");
  auto* dist_opt = model->add_option("--distances", dist_text, "distances d1,d2");
  point_opt->excludes(dist_opt);
  model->add_option("--tol", model_tol, "tolerance")->check(CLI::PositiveNumber);
  model->add_option("--out", model_out, "optional output prefix");

  // verify
  std::string case_name, v_domain, v_domain2, v_out;
  Real v_spacing = 0.02, v_tol = 1e-10;
  bool v_svg = false;
  unsigned seed = 0;
  auto* verify = app.add_subcommand("verify", "run an asymptotics verification case");
  verify->add_option("--case", case_name, "smooth | cone | localization | corner | properties")
      ->required();
  verify->add_option("--domain", v_domain, "domain JSON file")->required();
  verify->add_option("--domain2", v_domain2, "second domain (localization, properties)");
  verify->add_option("--spacing", v_spacing, "grid spacing")->required()->check(CLI::PositiveNumber);
  verify->add_option("--tol", v_tol, "solver tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--out", v_out, "output prefix")->required();
  verify->add_flag("--svg", v_svg, "write a log-log plot");
  verify->add_option("--seed", seed, "seed for randomized property sampling");

  try {
    app.parse(argc, argv);
    if (cone->parsed()) return run_cone(mu, tol, grid, out);
    if (constants->parsed()) return run_constants(mu1, mu2, const_tol, const_out);
    if (solve_cmd->parsed()) return run_solve(domain_path, spacing, solve_tol, solve_out, svg);
    if (model->parsed()) {
      if (point_text.empty() && dist_text.empty())
        throw hypgraph::DomainError("model: one of --point or --distances is required");
      return run_model(m_mu, kappa1, kappa2, point_text, dist_text, model_tol, model_out);
    }
    if (verify->parsed())
      return run_verify(case_name, v_domain, v_domain2, v_spacing, v_tol, v_out, v_svg, seed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const hypgraph::DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const hypgraph::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
