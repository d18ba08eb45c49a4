#include "fwg/io.hpp"

#include <fstream>
#include <sstream>

namespace fwg::io {

double jnum(double x) { return round_sig(x, 12); }

Json vec_to_json(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(jnum(v[i]));
  return arr;
}

Json mat_to_json(const Matrix& m) {
  Json arr = Json::array();
  for (int i = 0; i < m.rows(); ++i) arr.push_back(vec_to_json(m.row(i)));
  return arr;
}

namespace {

Matrix json_to_mat(const Json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw InvalidInput(std::string("gauge: ") + what + " must be a nonempty array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw InvalidInput(std::string("gauge: ragged ") + what);
    for (int k = 0; k < cols; ++k) {
      if (!j[i][k].is_number())
        throw InvalidInput(std::string("gauge: non-numeric entry in ") + what);
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

}  // namespace

LoadedGauge gauge_from_json_text(const std::string& text, double tol) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("gauge: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw InvalidInput("gauge: descriptor must be an object with a type");
  LoadedGauge out;
  out.type = j["type"].get<std::string>();
  if (out.type == "polyhedral") {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
      throw InvalidInput("gauge: polyhedral descriptor needs an integer dim");
    const int dim = j["dim"].get<int>();
    bool has_primal = j.contains("primal_vertices");
    bool has_dual = j.contains("dual_vertices");
    if (!has_primal && !has_dual)
      throw InvalidInput("gauge: polyhedral descriptor needs vertex lists");
    Matrix primal, dual;
    if (has_primal) primal = json_to_mat(j["primal_vertices"], "primal_vertices");
    if (has_dual) dual = json_to_mat(j["dual_vertices"], "dual_vertices");
    if (has_primal && primal.cols() != dim)
      throw InvalidInput("gauge: primal vertex dimension mismatch");
    if (has_dual && dual.cols() != dim)
      throw InvalidInput("gauge: dual vertex dimension mismatch");
    if (has_primal && has_dual)
      out.poly = PolyhedralGauge::from_vertices(primal, dual, tol);
    else if (has_primal)
      out.poly = PolyhedralGauge::from_primal(primal, tol);
    else
      out.poly = PolyhedralGauge::from_dual(dual, tol);
  } else if (out.type == "tropical") {
    if (!j.contains("d") || !j["d"].is_number_integer())
      throw InvalidInput("gauge: tropical descriptor needs an integer d");
    out.poly = tropical_gauge(j["d"].get<int>(), tol);
  } else if (out.type == "quantile") {
    if (!j.contains("b") || !j["b"].is_number())
      throw InvalidInput("gauge: quantile descriptor needs a number b");
    out.poly = quantile_gauge(j["b"].get<double>(), tol);
  } else if (out.type == "euclidean") {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
      throw InvalidInput("gauge: euclidean descriptor needs an integer dim");
    out.black_box = BlackBoxGauge::euclidean(j["dim"].get<int>());
  } else {
    throw InvalidInput("gauge: unknown type '" + out.type + "'");
  }
  return out;
}

LoadedGauge gauge_from_json_file(const std::string& path, double tol) {
  return gauge_from_json_text(read_file(path), tol);
}

Json gauge_info_json(const LoadedGauge& g) {
  Json j;
  j["type"] = g.type;
  if (g.polyhedral()) {
    const auto& p = g.p();
    j["dim"] = p.dim();
    j["primal_vertex_count"] = static_cast<int>(p.primal_vertices().rows());
    j["dual_vertex_count"] = static_cast<int>(p.dual_vertices().rows());
    j["skewness"] = jnum(p.skewness());
    j["breakdown_point"] = jnum(1.0 / (1.0 + p.skewness()));
    j["is_norm"] = p.is_norm();
    j["skew_dirs"] = mat_to_json(p.skew_dirs());
    j["primal_vertices"] = mat_to_json(p.primal_vertices());
    j["dual_vertices"] = mat_to_json(p.dual_vertices());
  } else {
    const auto& b = *g.black_box;
    j["dim"] = b.dim();
    j["skewness"] = jnum(b.skewness());
    j["breakdown_point"] = jnum(1.0 / (1.0 + b.skewness()));
  }
  return j;
}

namespace {

const char* uniqueness_str(Uniqueness u) {
  switch (u) {
    case Uniqueness::yes: return "yes";
    case Uniqueness::no: return "no";
    default: return "unknown";
  }
}

}  // namespace

Json solution_to_json(const FWSolution& sol) {
  Json j;
  j["optimizer"] = vec_to_json(sol.optimizer);
  j["objective"] = jnum(sol.objective);
  j["unique"] = uniqueness_str(sol.unique);
  Json cert = Json::array();
  for (const auto& e : sol.certificate.entries) {
    Json c;
    c["point"] = e.point;
    c["dual_vertex"] = e.dual_index;
    c["lambda"] = jnum(e.lambda);
    cert.push_back(c);
  }
  j["certificate"] = cert;
  j["certificate_residual"] = jnum(sol.certificate.residual);
  return j;
}

namespace {

Json cell_to_json(const cells::ElementaryCell& c) {
  Json j;
  j["dim"] = c.dim;
  j["bounded"] = c.bounded;
  Json verts = Json::array();
  for (const auto& v : c.vertices) verts.push_back(vec_to_json(v));
  j["vertices"] = verts;
  if (!c.rays.empty()) {
    Json rays = Json::array();
    for (const auto& r : c.rays) rays.push_back(vec_to_json(r));
    j["rays"] = rays;
  }
  if (c.clipped) j["clipped"] = true;
  j["rep"] = vec_to_json(c.rep);
  Json fam = Json::array();
  for (const auto& f : c.family) fam.push_back(f);
  j["family"] = fam;
  return j;
}

}  // namespace

Json region_to_json(const cells::Region& region) {
  Json j;
  Json arr = Json::array();
  for (const auto& c : region.cells) arr.push_back(cell_to_json(c));
  j["cells"] = arr;
  return j;
}

Json cl_to_json(const cl::CLRegion& region) {
  Json j;
  j["points"] = mat_to_json(region.complex.points);
  Json acc = Json::array();
  for (int idx : region.accepted) {
    Json c = cell_to_json(region.complex.cells[idx]);
    c["min_dual"] = jnum(region.min_dual[idx]);
    if (region.witness[idx]) {
      Json w;
      w["e"] = vec_to_json(region.witness[idx]->e);
      w["w_e"] = jnum(region.witness[idx]->w_e);
      c["witness"] = w;
    }
    acc.push_back(c);
  }
  j["accepted"] = acc;
  Json rej = Json::array();
  for (int idx : region.rejected) {
    Json c = cell_to_json(region.complex.cells[idx]);
    c["min_dual"] = jnum(region.min_dual[idx]);
    rej.push_back(c);
  }
  j["rejected"] = rej;
  Json ind = Json::array();
  for (int idx : region.indeterminate)
    ind.push_back(cell_to_json(region.complex.cells[idx]));
  j["indeterminate"] = ind;
  j["connected"] = region.connected;
  j["sandwich_ok"] = region.sandwich_ok;
  return j;
}

Json report_to_json(const robust::RobustnessReport& rep) {
  Json j;
  j["threshold_fraction"] = jnum(rep.threshold_fraction);
  j["corrupted_weight"] = jnum(rep.corrupted_weight);
  j["kappa"] = jnum(rep.kappa);
  j["base_optimizer"] = vec_to_json(rep.base_optimizer);
  j["max_ratio"] = jnum(rep.max_ratio);
  j["violations"] = rep.violations;
  Json trials = Json::array();
  for (const auto& t : rep.trials) {
    Json rec;
    rec["trial"] = t.trial;
    rec["adversarial"] = t.adversarial;
    if (t.adversarial) rec["M"] = jnum(t.shift_magnitude);
    rec["optimizer"] = vec_to_json(t.optimizer);
    rec["distance"] = jnum(t.distance);
    rec["ratio"] = jnum(t.ratio);
    trials.push_back(rec);
  }
  j["trials"] = trials;
  return j;
}

Json escape_to_json(const robust::EscapeResult& res) {
  Json j;
  j["escaped"] = res.M_found.has_value();
  if (res.M_found) j["M"] = jnum(*res.M_found);
  j["radius"] = jnum(res.radius);
  j["base_optimizer"] = vec_to_json(res.base_optimizer);
  Json tr = Json::array();
  for (const auto& [M, dist] : res.trace) {
    Json rec;
    rec["M"] = jnum(M);
    rec["distance"] = jnum(dist);
    tr.push_back(rec);
  }
  j["trace"] = tr;
  return j;
}

std::string escape_trace_csv(const robust::EscapeResult& res) {
  std::string out = "M,distance\n";
  for (const auto& [M, dist] : res.trace)
    out += fmt_sig(M) + "," + fmt_sig(dist) + "\n";
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("io: cannot write '" + path + "'");
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("io: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace {

std::string num(double x) { return fmt_sig(x, 6); }

}  // namespace

std::string svg_render(const WeightedSample& s, const cells::Region& hull,
                       const cl::CLRegion* cl_region) {
  // Content bounds: sample plus hull cells; y flips so the chart reads y-up.
  double x0 = s.points.col(0).minCoeff(), x1 = s.points.col(0).maxCoeff();
  double y0 = s.dim() > 1 ? s.points.col(1).minCoeff() : 0.0;
  double y1 = s.dim() > 1 ? s.points.col(1).maxCoeff() : 0.0;
  for (const auto& c : hull.cells)
    for (const auto& v : c.vertices) {
      x0 = std::min(x0, v[0]);
      x1 = std::max(x1, v[0]);
      if (v.size() > 1) {
        y0 = std::min(y0, v[1]);
        y1 = std::max(y1, v[1]);
      }
    }
  double span = std::max({x1 - x0, y1 - y0, 1.0});
  double margin = 0.25 * span;
  x0 -= margin; x1 += margin; y0 -= margin; y1 += margin;
  const double W = 480.0;
  double scale = W / (x1 - x0);
  double H = (y1 - y0) * scale;
  auto X = [&](double x) { return (x - x0) * scale; };
  auto Y = [&](double y) { return H - (y - y0) * scale; };
  auto pt_xy = [&](const Vector& v) {
    double vy = v.size() > 1 ? v[1] : 0.0;
    return std::pair<double, double>(X(v[0]), Y(vy));
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << num(W) << "\" height=\"" << num(H) << "\" viewBox=\"0 0 " << num(W)
      << " " << num(H) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto poly_path = [&](const cells::ElementaryCell& c) {
    std::string d;
    for (size_t i = 0; i < c.vertices.size(); ++i) {
      auto [px, py] = pt_xy(c.vertices[i]);
      d += (i == 0 ? "M" : "L") + num(px) + " " + num(py);
    }
    d += "Z";
    return d;
  };

  // Elementary hull, grey.
  for (const auto& c : hull.cells) {
    if (c.dim == 2 && c.vertices.size() >= 3)
      svg << "<path d=\"" << poly_path(c)
          << "\" fill=\"#cccccc\" stroke=\"#b3b3b3\" stroke-width=\"0.6\"/>\n";
  }
  for (const auto& c : hull.cells) {
    if (c.dim == 1 && c.vertices.size() == 2) {
      auto [ax, ay] = pt_xy(c.vertices[0]);
      auto [bx, by] = pt_xy(c.vertices[1]);
      svg << "<line x1=\"" << num(ax) << "\" y1=\"" << num(ay) << "\" x2=\""
          << num(bx) << "\" y2=\"" << num(by)
          << "\" stroke=\"#b3b3b3\" stroke-width=\"0.6\"/>\n";
    }
  }

  // Contamination locus, black.
  if (cl_region) {
    for (int idx : cl_region->accepted) {
      const auto& c = cl_region->complex.cells[idx];
      if (c.dim == 2 && c.vertices.size() >= 3)
        svg << "<path d=\"" << poly_path(c) << "\" fill=\"black\"/>\n";
      else if (c.dim == 1 && c.vertices.size() == 2) {
        auto [ax, ay] = pt_xy(c.vertices[0]);
        auto [bx, by] = pt_xy(c.vertices[1]);
        svg << "<line x1=\"" << num(ax) << "\" y1=\"" << num(ay) << "\" x2=\""
            << num(bx) << "\" y2=\"" << num(by)
            << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
      } else if (c.dim == 0 && !c.vertices.empty()) {
        auto [px, py] = pt_xy(c.vertices[0]);
        svg << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py)
            << "\" r=\"3\" fill=\"black\"/>\n";
      }
    }
  }

  // Sample points, white with weight labels.
  for (int i = 0; i < s.size(); ++i) {
    auto [px, py] = pt_xy(s.point(i));
    svg << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py)
        << "\" r=\"4\" fill=\"white\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
    svg << "<text x=\"" << num(px + 7) << "\" y=\"" << num(py - 7)
        << "\" font-family=\"sans-serif\" font-size=\"14\">"
        << fmt_sig(s.weights[i], 6) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fwg::io
