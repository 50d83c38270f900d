#include "hypgraph/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hypgraph {

using nlohmann::json;

std::string format_real(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("atomic_write: cannot open " + tmp.string());
    out << content;
    if (!out.good()) throw DomainError("atomic_write: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

Vec2 vec2_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw DomainError("domain file: expected [x, y] pair");
  return {j[0].get<Real>(), j[1].get<Real>()};
}

json json_of(const Vec2& v) { return json::array({v.x(), v.y()}); }

}  // namespace

ConvexCornerDomain parse_domain(const json& doc) {
  if (!doc.contains("arcs")) throw DomainError("domain file: missing \"arcs\"");
  std::vector<BoundaryArc> arcs;
  for (const auto& a : doc.at("arcs")) {
    const std::string kind = a.at("kind").get<std::string>();
    if (kind == "circle") {
      arcs.push_back(BoundaryArc::circle(vec2_of(a.at("center")), a.at("radius").get<Real>(),
                                         a.at("angle_start").get<Real>(),
                                         a.at("angle_end").get<Real>()));
    } else if (kind == "ellipse") {
      arcs.push_back(BoundaryArc::ellipse(vec2_of(a.at("center")), a.at("semi_a").get<Real>(),
                                          a.at("semi_b").get<Real>(),
                                          a.value("rotation", 0.0), a.at("param_start").get<Real>(),
                                          a.at("param_end").get<Real>()));
    } else {
      throw DomainError("domain file: unknown arc kind \"" + kind + "\"");
    }
  }
  std::vector<CornerData> corners;
  for (const auto& c : doc.value("corners", json::array())) {
    CornerData corner;
    corner.vertex = vec2_of(c.at("vertex"));
    corner.mu = c.at("mu").get<Real>();
    corner.nu1 = vec2_of(c.at("nu1"));
    corner.nu2 = vec2_of(c.at("nu2"));
    corner.kappa1 = c.at("kappa1").get<Real>();
    corner.kappa2 = c.at("kappa2").get<Real>();
    corners.push_back(corner);
  }
  return ConvexCornerDomain(std::move(arcs), std::move(corners));
}

ConvexCornerDomain load_domain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read domain file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DomainError("domain file " + path.string() + ": " + e.what());
  }
  return parse_domain(doc);
}

json domain_to_json(const ConvexCornerDomain& domain) {
  json arcs = json::array();
  for (const auto& arc : domain.arcs()) {
    json a;
    switch (arc.kind()) {
      case ArcKind::CircleArc:
        a["kind"] = "circle";
        a["center"] = json_of(arc.circle_center());
        a["radius"] = arc.circle_radius();
        a["angle_start"] = arc.circle_angle_start();
        a["angle_end"] = arc.circle_angle_end();
        break;
      case ArcKind::EllipseArc:
        a["kind"] = "ellipse";
        a["center"] = json_of(arc.ellipse_center());
        a["semi_a"] = arc.ellipse_semi_a();
        a["semi_b"] = arc.ellipse_semi_b();
        a["rotation"] = arc.ellipse_rotation();
        a["param_start"] = arc.param_start();
        a["param_end"] = arc.param_end();
        break;
      case ArcKind::AnalyticArc:
        throw DomainError("domain_to_json: closure-backed analytic arcs are not serializable");
    }
    arcs.push_back(a);
  }
  json corners = json::array();
  for (const auto& c : domain.corners()) {
    corners.push_back({{"vertex", json_of(c.vertex)},
                       {"mu", c.mu},
                       {"nu1", json_of(c.nu1)},
                       {"nu2", json_of(c.nu2)},
                       {"kappa1", c.kappa1},
                       {"kappa2", c.kappa2}});
  }
  return json{{"arcs", arcs}, {"corners", corners}};
}

std::string field_csv(const ScalarField& field) {
  const GradedGrid& g = *field.grid;
  std::ostringstream os;
  os << "x,y,f,w,d\n";
  for (int u = 0; u < g.unknown_count(); ++u) {
    const Vec2 p = g.position(g.node_of_unknown[static_cast<std::size_t>(u)]);
    os << format_real(p.x()) << ',' << format_real(p.y()) << ',' << format_real(field.f[u]) << ','
       << format_real(field.w[u]) << ',' << format_real(g.distance[static_cast<std::size_t>(u)])
       << '\n';
  }
  return os.str();
}

std::string cone_table_csv(const ConeSolutionTable& table) {
  std::ostringstream os;
  os << "theta,h,h_prime,H\n";
  for (std::size_t i = 0; i < table.theta.size(); ++i) {
    os << format_real(table.theta[i]) << ',' << format_real(table.h[i]) << ','
       << format_real(table.h_prime[i]) << ',' << format_real(table.H[i]) << '\n';
  }
  return os.str();
}

std::string annuli_csv(const AsymptoticsReport& report) {
  std::ostringstream os;
  os << "r_outer,r_inner,sup,count\n";
  for (const auto& a : report.annuli) {
    os << format_real(a.r_outer) << ',' << format_real(a.r_inner) << ',' << format_real(a.sup)
       << ',' << a.count << '\n';
  }
  return os.str();
}

json report_to_json(const AsymptoticsReport& report) {
  json annuli = json::array();
  for (const auto& a : report.annuli)
    annuli.push_back(
        {{"r_outer", a.r_outer}, {"r_inner", a.r_inner}, {"sup", a.sup}, {"count", a.count}});
  return json{{"case", report.case_name},
              {"annuli", annuli},
              {"fitted_exponent", report.fitted_exponent},
              {"fit_rms", report.fit_rms},
              {"decay_pass", report.decay_pass},
              {"pass", report.pass},
              {"max_usable_radius", report.max_usable_radius},
              {"detail", report.detail}};
}

namespace {

struct SvgCanvas {
  std::ostringstream body;
  Real min_x = 0, min_y = 0, max_x = 1, max_y = 1;
  int width = 640, height = 640;

  Real sx(Real x) const { return (x - min_x) / (max_x - min_x) * (width - 40) + 20; }
  Real sy(Real y) const { return height - 20 - (y - min_y) / (max_y - min_y) * (height - 40); }

  void line(Real x0, Real y0, Real x1, Real y1, const char* color, Real w = 1.0) {
    body << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(y0) << "\" x2=\"" << sx(x1) << "\" y2=\""
         << sy(y1) << "\" stroke=\"" << color << "\" stroke-width=\"" << w << "\"/>\n";
  }
  void dot(Real x, Real y, const char* color) {
    body << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
  }
  std::string finish() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n<rect width=\"100%\" "
       << "height=\"100%\" fill=\"white\"/>\n"
       << body.str() << "</svg>\n";
    return os.str();
  }
};

}  // namespace

std::string field_contour_svg(const ScalarField& field, int contour_levels) {
  const GradedGrid& g = *field.grid;
  SvgCanvas canvas;
  const auto box = g.domain->bounding_box();
  canvas.min_x = box.min().x();
  canvas.min_y = box.min().y();
  canvas.max_x = box.max().x();
  canvas.max_y = box.max().y();

  // boundary outline
  for (const auto& arc : g.domain->arcs()) {
    Vec2 prev = arc.start_point();
    for (int k = 1; k <= 96; ++k) {
      const Real s = arc.param_start() + (arc.param_end() - arc.param_start()) * k / 96.0;
      const Vec2 p = arc.point(s);
      canvas.line(prev.x(), prev.y(), p.x(), p.y(), "black", 1.5);
      prev = p;
    }
  }

  const Real fmax = field.f.size() ? field.f.maxCoeff() : 0;
  auto value = [&](int i, int j) -> Real {
    const int u = g.unknown_index[static_cast<std::size_t>(g.flat(i, j))];
    return u >= 0 ? field.f[u] : -1;  // exterior sentinel below every level
  };
  // marching squares on cells whose four corners are inside
  for (int level = 1; level <= contour_levels; ++level) {
    const Real c = fmax * level / (contour_levels + 1);
    for (int j = 0; j + 1 < g.ny; ++j) {
      for (int i = 0; i + 1 < g.nx; ++i) {
        const Real v00 = value(i, j), v10 = value(i + 1, j), v01 = value(i, j + 1),
                   v11 = value(i + 1, j + 1);
        if (v00 < 0 || v10 < 0 || v01 < 0 || v11 < 0) continue;
        const Vec2 p00 = g.position(g.flat(i, j));
        auto cross = [&](Real a, Real b) { return (c - a) / (b - a); };
        std::vector<Vec2> pts;
        if ((v00 < c) != (v10 < c))
          pts.push_back(p00 + Vec2(g.spacing * cross(v00, v10), 0));
        if ((v10 < c) != (v11 < c))
          pts.push_back(p00 + Vec2(g.spacing, g.spacing * cross(v10, v11)));
        if ((v01 < c) != (v11 < c))
          pts.push_back(p00 + Vec2(g.spacing * cross(v01, v11), g.spacing));
        if ((v00 < c) != (v01 < c))
          pts.push_back(p00 + Vec2(0, g.spacing * cross(v00, v01)));
        if (pts.size() >= 2)
          canvas.line(pts[0].x(), pts[0].y(), pts[1].x(), pts[1].y(), "steelblue");
      }
    }
  }
  return canvas.finish();
}

std::string report_svg(const AsymptoticsReport& report) {
  SvgCanvas canvas;
  std::vector<Real> lx, ly;
  for (const auto& a : report.annuli) {
    if (a.count <= 0 || a.sup <= 0) continue;
    lx.push_back(std::log10(std::sqrt(a.r_outer * a.r_inner)));
    ly.push_back(std::log10(a.sup));
  }
  if (lx.size() < 2) return canvas.finish();
  canvas.min_x = *std::min_element(lx.begin(), lx.end()) - 0.2;
  canvas.max_x = *std::max_element(lx.begin(), lx.end()) + 0.2;
  canvas.min_y = *std::min_element(ly.begin(), ly.end()) - 0.2;
  canvas.max_y = *std::max_element(ly.begin(), ly.end()) + 0.2;
  for (std::size_t i = 0; i < lx.size(); ++i) canvas.dot(lx[i], ly[i], "firebrick");
  // fitted line in log10 coordinates
  const Real b = report.fitted_exponent;
  if (b != 0) {
    Real mean_x = 0, mean_y = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mean_x += lx[i];
      mean_y += ly[i];
    }
    mean_x /= static_cast<Real>(lx.size());
    mean_y /= static_cast<Real>(lx.size());
    canvas.line(canvas.min_x, mean_y + b * (canvas.min_x - mean_x), canvas.max_x,
                mean_y + b * (canvas.max_x - mean_x), "gray");
  }
  return canvas.finish();
}

}  // namespace hypgraph
