#include "fwg/cells.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "fwg/lp.hpp"
#include "fwg/solver.hpp"

namespace fwg::cells {
namespace {

using Pt = Eigen::Vector2d;

double cross2(const Pt& a, const Pt& b) { return a.x() * b.y() - a.y() * b.x(); }

struct LinCon {
  Vector w;
  double c;
};  // <w,x> <= c (ineq) or = c (eq)

double point_seg_dist(const Pt& p, const Pt& a, const Pt& b) {
  Pt ab = b - a;
  double t = ab.squaredNorm() > 0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double seg_seg_dist(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
  double denom = cross2(b - a, d - c);
  if (std::abs(denom) > 1e-14) {
    double t = cross2(c - a, d - c) / denom;
    double u = cross2(c - a, b - a) / denom;
    if (t >= 0 && t <= 1 && u >= 0 && u <= 1) return 0.0;
  }
  return std::min(std::min(point_seg_dist(a, c, d), point_seg_dist(b, c, d)),
                  std::min(point_seg_dist(c, a, b), point_seg_dist(d, a, b)));
}

// Sutherland-Hodgman clip of a convex ccw polygon by <w,x> <= c.
std::vector<Pt> clip_halfplane(const std::vector<Pt>& poly, const Pt& w,
                               double c, double eps) {
  std::vector<Pt> out;
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Pt& p = poly[i];
    const Pt& q = poly[(i + 1) % n];
    double sp = w.dot(p) - c;
    double sq = w.dot(q) - c;
    if (sp <= eps) out.push_back(p);
    if ((sp < -eps && sq > eps) || (sp > eps && sq < -eps)) {
      double t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

std::vector<Pt> dedupe_poly(std::vector<Pt> poly, double eps) {
  std::vector<Pt> out;
  for (const Pt& p : poly) {
    if (out.empty() || (out.back() - p).norm() > eps) out.push_back(p);
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= eps)
    out.pop_back();
  return out;
}

struct BoxSpec {
  Pt center;
  double half;
};

BoxSpec working_box(const PolyhedralGauge& g, const Matrix& A,
                    const Vector* extra) {
  Pt lo(A.col(0).minCoeff(), A.cols() > 1 ? A.col(1).minCoeff() : 0.0);
  Pt hi(A.col(0).maxCoeff(), A.cols() > 1 ? A.col(1).maxCoeff() : 0.0);
  Pt center = 0.5 * (lo + hi);
  double diam = (hi - lo).norm();
  double half = 5.0 * std::max(diam, 1.0) * (1.0 + g.skewness());
  if (extra) {
    Pt x((*extra)[0], extra->size() > 1 ? (*extra)[1] : 0.0);
    half = std::max(half, 2.0 * (x - center).lpNorm<Eigen::Infinity>() + 1.0);
  }
  return {center, half};
}

// Constraint system of the cell with the given family. Inequalities tight at
// x are promoted to equalities: x lies in the cell's relative interior, so a
// constraint tight at x is tight on the whole cell.
void cell_constraints(const PolyhedralGauge& g, const Matrix& A,
                      const std::vector<std::vector<int>>& fam, const Vector& x,
                      std::vector<LinCon>* eqs, std::vector<LinCon>* ineqs) {
  const Matrix& P = g.dual_vertices();
  const int nd = static_cast<int>(P.rows());
  for (int i = 0; i < A.rows(); ++i) {
    Vector a = A.row(i);
    const auto& S = fam[i];
    std::vector<bool> in_face(nd, false);
    for (int j : S) in_face[j] = true;
    Vector p0 = P.row(S.front());
    for (int j : S) {
      if (j == S.front()) continue;
      Vector w = (P.row(j) - p0.transpose()).transpose();
      if (w.norm() < 1e-13) continue;
      eqs->push_back({w, w.dot(a)});
    }
    for (int j = 0; j < nd; ++j) {
      if (in_face[j]) continue;
      Vector w = (P.row(j) - p0.transpose()).transpose();
      if (w.norm() < 1e-13) continue;
      double c = w.dot(a);
      double slack = c - w.dot(x);
      double scale = std::max({1.0, std::abs(c), w.norm() * x.norm()});
      if (std::abs(slack) <= 1e-9 * scale)
        eqs->push_back({w, c});
      else
        ineqs->push_back({w, c});
    }
  }
}

// Extreme directions of {r : <w,r> = 0 (eqs), <w,r> <= 0 (ineqs)} in 2-D.
std::vector<Vector> recession_dirs_2d(const std::vector<LinCon>& eqs,
                                      const std::vector<LinCon>& ineqs) {
  std::vector<Pt> cands;
  auto add = [&](const Pt& r) {
    if (r.norm() < 1e-12) return;
    cands.push_back(r.normalized());
  };
  for (const auto& e : eqs) {
    add(Pt(-e.w[1], e.w[0]));
    add(Pt(e.w[1], -e.w[0]));
  }
  for (const auto& c : ineqs) {
    add(Pt(-c.w[1], c.w[0]));
    add(Pt(c.w[1], -c.w[0]));
  }
  std::vector<Vector> out;
  for (const Pt& r : cands) {
    bool ok = true;
    for (const auto& e : eqs)
      if (std::abs(e.w[0] * r.x() + e.w[1] * r.y()) > 1e-9) ok = false;
    for (const auto& c : ineqs)
      if (c.w[0] * r.x() + c.w[1] * r.y() > 1e-9) ok = false;
    if (!ok) continue;
    Vector v(2);
    v << r.x(), r.y();
    bool dup = false;
    for (const auto& u : out)
      if ((u - v).norm() < 1e-9) dup = true;
    if (!dup) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), [](const Vector& a, const Vector& b) {
    return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
  });
  return out;
}

// Boundedness two ways: the recession cone is trivial iff the exposed
// primal faces of the family have empty intersection. Both routes are
// computed by LP and must agree.
bool bounded_by_lps(const PolyhedralGauge& g, const Matrix& A,
                    const std::vector<std::vector<int>>& fam,
                    const std::vector<LinCon>& eqs,
                    const std::vector<LinCon>& ineqs) {
  const int d = g.dim();

  // Route 1: face-intersection LP.
  bool face_empty = false;
  std::vector<std::vector<int>> faces(A.rows());
  for (int i = 0; i < A.rows() && !face_empty; ++i) {
    Vector pbar = Vector::Zero(d);
    for (int j : fam[i]) pbar += g.dual_vertices().row(j).transpose();
    pbar /= static_cast<double>(fam[i].size());
    if (g.dual_eval(pbar) < 1.0 - rel_tol(1.0, g.tol())) {
      face_empty = true;  // exposed face is empty; the cone is {0}
      break;
    }
    faces[i] = g.active_primal(pbar);
  }
  bool bounded_face;
  if (face_empty) {
    bounded_face = true;
  } else {
    lp::Model mdl;
    std::vector<int> y(d);
    for (int k = 0; k < d; ++k) y[k] = mdl.add_var(0.0, true);
    for (int i = 0; i < A.rows(); ++i) {
      std::vector<int> mu(faces[i].size());
      for (size_t j = 0; j < faces[i].size(); ++j) mu[j] = mdl.add_var(0.0);
      std::vector<lp::Model::Term> ones;
      for (int v : mu) ones.push_back({v, 1.0});
      mdl.add_eq(ones, 1.0);
      for (int k = 0; k < d; ++k) {
        std::vector<lp::Model::Term> terms{{y[k], -1.0}};
        for (size_t j = 0; j < faces[i].size(); ++j)
          terms.push_back({mu[j], g.primal_vertices()(faces[i][j], k)});
        mdl.add_eq(terms, 0.0);
      }
    }
    bounded_face = mdl.minimize().status != lp::Status::optimal;
  }

  // Route 2: recession-cone LP.
  bool unbounded_rec = false;
  for (int k = 0; k < d && !unbounded_rec; ++k) {
    for (double sign : {1.0, -1.0}) {
      lp::Model mdl;
      std::vector<int> r(d);
      for (int t = 0; t < d; ++t)
        r[t] = mdl.add_var(t == k ? sign : 0.0, true);
      for (const auto& e : eqs) {
        std::vector<lp::Model::Term> terms;
        for (int t = 0; t < d; ++t) terms.push_back({r[t], e.w[t]});
        mdl.add_eq(terms, 0.0);
      }
      for (const auto& cns : ineqs) {
        std::vector<lp::Model::Term> terms;
        for (int t = 0; t < d; ++t) terms.push_back({r[t], cns.w[t]});
        mdl.add_le(terms, 0.0);
      }
      for (int t = 0; t < d; ++t) {
        mdl.add_le({{r[t], 1.0}}, 1.0);
        mdl.add_ge({{r[t], 1.0}}, -1.0);
      }
      auto res = mdl.maximize();
      if (res.status != lp::Status::optimal)
        throw InternalError("cells: recession LP failed");
      if (res.objective > 1e-7) {
        unbounded_rec = true;
        break;
      }
    }
  }

  if (bounded_face == unbounded_rec)
    throw InternalError(
        "cells: recession-cone and face-intersection boundedness disagree");
  return bounded_face;
}

}  // namespace

Matrix distinct_points(const Matrix& pts, double eps) {
  std::vector<int> rep;
  for (int i = 0; i < pts.rows(); ++i) {
    bool dup = false;
    for (int k : rep)
      if ((pts.row(i) - pts.row(k)).norm() <= eps) dup = true;
    if (!dup) rep.push_back(i);
  }
  Matrix out(static_cast<int>(rep.size()), pts.cols());
  for (size_t k = 0; k < rep.size(); ++k)
    out.row(static_cast<int>(k)) = pts.row(rep[k]);
  return out;
}

ConeDesc cone_of_face(const PolyhedralGauge& g, const SubgradientFace& face) {
  ConeDesc out;
  if (face.indices.empty()) throw InvalidInput("cone_of_face: empty face");
  Vector pbar = Vector::Zero(g.dim());
  for (int j : face.indices) pbar += g.dual_vertices().row(j).transpose();
  pbar /= static_cast<double>(face.indices.size());
  if (g.dual_eval(pbar) < 1.0 - rel_tol(1.0, g.tol())) return out;  // {0}
  out.primal_indices = g.active_primal(pbar);
  out.generators.resize(static_cast<int>(out.primal_indices.size()), g.dim());
  for (size_t i = 0; i < out.primal_indices.size(); ++i)
    out.generators.row(static_cast<int>(i)) =
        g.primal_vertices().row(out.primal_indices[i]);
  return out;
}

std::vector<std::vector<int>> family_at(const PolyhedralGauge& g,
                                        const Matrix& A, const Vector& x) {
  if (g.dim() > 2)
    throw InvalidInput("cells: only dimensions 1 and 2 are supported");
  Matrix pts = distinct_points(A);
  double scale =
      std::max(x.lpNorm<Eigen::Infinity>(), pts.lpNorm<Eigen::Infinity>());
  std::vector<std::vector<int>> fam(pts.rows());
  for (int i = 0; i < pts.rows(); ++i) {
    Vector z = x - pts.row(i).transpose();
    if (z.lpNorm<Eigen::Infinity>() <= 1e-12 * std::max(1.0, scale)) {
      fam[i].resize(g.dual_vertices().rows());
      for (int j = 0; j < g.dual_vertices().rows(); ++j) fam[i][j] = j;
    } else {
      fam[i] = g.active_dual(z);
    }
  }
  return fam;
}

ElementaryCell elementary_cell_at(const PolyhedralGauge& g, const Matrix& A,
                                  const Vector& x) {
  const int d = g.dim();
  if (d > 2)
    throw InvalidInput("cells: only dimensions 1 and 2 are supported");
  Matrix pts = distinct_points(A);
  ElementaryCell cell;
  cell.family = family_at(g, A, x);
  cell.rep = x;

  std::vector<LinCon> eqs, ineqs;
  cell_constraints(g, pts, cell.family, x, &eqs, &ineqs);

  // Affine hull rank from the equality normals.
  std::vector<Vector> basis;
  for (const auto& e : eqs) {
    Vector w = e.w;
    for (const auto& b : basis) w -= b.dot(w) * b;
    if (w.norm() > 1e-9) basis.push_back(w.normalized());
  }
  const int rank = static_cast<int>(basis.size());
  cell.dim = d - rank;
  cell.bounded = bounded_by_lps(g, pts, cell.family, eqs, ineqs);

  BoxSpec box = working_box(g, pts, &x);

  if (cell.dim == 0) {
    cell.vertices = {x};
    cell.rep = x;
    return cell;
  }

  if (cell.dim == 1) {
    Vector dir;
    if (d == 1) {
      dir = make_vector({1.0});
    } else {
      dir = Vector(2);
      dir << -basis[0][1], basis[0][0];
    }
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& c : ineqs) {
      double alpha = c.w.dot(dir);
      double beta = c.c - c.w.dot(x);
      if (alpha > 1e-12)
        hi = std::min(hi, beta / alpha);
      else if (alpha < -1e-12)
        lo = std::max(lo, beta / alpha);
    }
    double reach = 2 * box.half;
    bool lo_inf = !std::isfinite(lo), hi_inf = !std::isfinite(hi);
    cell.clipped = lo_inf || hi_inf;
    double lo_c = lo_inf ? -reach : lo;
    double hi_c = hi_inf ? reach : hi;
    if (!lo_inf) cell.vertices.push_back(x + lo * dir);
    if (!hi_inf) cell.vertices.push_back(x + hi * dir);
    if (lo_inf) cell.rays.push_back(-dir);
    if (hi_inf) cell.rays.push_back(dir);
    if (cell.bounded) {
      cell.rep = x + 0.5 * (lo + hi) * dir;
      cell.clipped = false;
    } else {
      cell.rep = x + 0.5 * (lo_c + hi_c) * dir;
    }
    return cell;
  }

  // Full-dimensional: clip the working box by the inequalities; enlarge the
  // box until a bounded cell is entirely interior so its polygon is exact.
  for (int attempt = 0; attempt < 4; ++attempt) {
    double h = box.half * std::pow(4.0, attempt);
    double eps = 1e-9 * std::max(1.0, h);
    std::vector<Pt> poly{{box.center.x() - h, box.center.y() - h},
                         {box.center.x() + h, box.center.y() - h},
                         {box.center.x() + h, box.center.y() + h},
                         {box.center.x() - h, box.center.y() + h}};
    for (const auto& c : ineqs) {
      poly = clip_halfplane(poly, Pt(c.w[0], c.w[1]), c.c, eps);
      if (poly.empty()) break;
    }
    poly = dedupe_poly(poly, 10 * eps);
    if (poly.size() < 3)
      throw InternalError("cells: full-dimensional cell clipped to nothing");
    bool touches = false;
    for (const Pt& p : poly)
      if (std::abs(std::abs(p.x() - box.center.x()) - h) <= 10 * eps ||
          std::abs(std::abs(p.y() - box.center.y()) - h) <= 10 * eps)
        touches = true;
    if (!cell.bounded || !touches) {
      cell.clipped = touches;
      cell.vertices.clear();
      for (const Pt& p : poly) cell.vertices.push_back(make_vector({p.x(), p.y()}));
      break;
    }
  }
  if (!cell.bounded) cell.rays = recession_dirs_2d(eqs, ineqs);

  if (cell.bounded) {
    Vector c = Vector::Zero(d);
    for (const auto& v : cell.vertices) c += v;
    cell.rep = c / static_cast<double>(cell.vertices.size());
  }
  return cell;
}

namespace {

std::vector<Vector> probe_points_1d(const Matrix& pts) {
  std::vector<double> xs;
  for (int i = 0; i < pts.rows(); ++i) xs.push_back(pts(i, 0));
  std::sort(xs.begin(), xs.end());
  std::vector<Vector> probes;
  double span = std::max(1.0, xs.back() - xs.front());
  probes.push_back(make_vector({xs.front() - span}));
  for (size_t i = 0; i < xs.size(); ++i) {
    probes.push_back(make_vector({xs[i]}));
    if (i + 1 < xs.size() && xs[i + 1] - xs[i] > 1e-12)
      probes.push_back(make_vector({0.5 * (xs[i] + xs[i + 1])}));
  }
  probes.push_back(make_vector({xs.back() + span}));
  return probes;
}

struct Arrangement {
  std::vector<Pt> vertices;
  std::vector<std::pair<int, int>> edges;
};

Arrangement build_arrangement(const PolyhedralGauge& g, const Matrix& pts,
                              const BoxSpec& box_in) {
  // Extend the working box to cover every pairwise ray crossing so that no
  // bounded cell is cut off.
  std::vector<std::pair<Pt, Pt>> rays;  // apex, direction
  for (int i = 0; i < pts.rows(); ++i)
    for (int j = 0; j < g.primal_vertices().rows(); ++j) {
      Pt a(pts(i, 0), pts(i, 1));
      Pt u(g.primal_vertices()(j, 0), g.primal_vertices()(j, 1));
      rays.push_back({a, u.normalized()});
    }
  double half = box_in.half;
  for (size_t i = 0; i < rays.size(); ++i)
    for (size_t j = i + 1; j < rays.size(); ++j) {
      double denom = cross2(rays[i].second, rays[j].second);
      if (std::abs(denom) < 1e-12) continue;
      Pt dp = rays[j].first - rays[i].first;
      double t1 = cross2(dp, rays[j].second) / denom;
      double t2 = cross2(dp, rays[i].second) / denom;
      if (t1 >= -1e-9 && t2 >= -1e-9) {
        Pt q = rays[i].first + t1 * rays[i].second;
        half = std::max(half,
                        1.25 * (q - box_in.center).lpNorm<Eigen::Infinity>() + 0.1);
      }
    }
  Pt lo = box_in.center - Pt(half, half);
  Pt hi = box_in.center + Pt(half, half);

  std::vector<std::pair<Pt, Pt>> segs;
  for (const auto& r : rays) {
    double t_exit = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2; ++k) {
      if (r.second[k] > 1e-14)
        t_exit = std::min(t_exit, (hi[k] - r.first[k]) / r.second[k]);
      else if (r.second[k] < -1e-14)
        t_exit = std::min(t_exit, (lo[k] - r.first[k]) / r.second[k]);
    }
    segs.push_back({r.first, r.first + t_exit * r.second});
  }
  segs.push_back({lo, Pt(hi.x(), lo.y())});
  segs.push_back({Pt(hi.x(), lo.y()), hi});
  segs.push_back({hi, Pt(lo.x(), hi.y())});
  segs.push_back({Pt(lo.x(), hi.y()), lo});

  // Pairwise intersections become split parameters on each segment.
  const int ns = static_cast<int>(segs.size());
  std::vector<std::vector<double>> params(ns);
  for (int i = 0; i < ns; ++i) {
    params[i].push_back(0.0);
    params[i].push_back(1.0);
  }
  auto param_of = [&](int i, const Pt& q) {
    Pt d = segs[i].second - segs[i].first;
    return d.dot(q - segs[i].first) / d.squaredNorm();
  };
  for (int i = 0; i < ns; ++i)
    for (int j = i + 1; j < ns; ++j) {
      Pt d1 = segs[i].second - segs[i].first;
      Pt d2 = segs[j].second - segs[j].first;
      double denom = cross2(d1, d2);
      Pt dp = segs[j].first - segs[i].first;
      if (std::abs(denom) > 1e-12 * d1.norm() * d2.norm()) {
        double t = cross2(dp, d2) / denom;
        double u = cross2(dp, d1) / denom;
        if (t > -1e-12 && t < 1 + 1e-12 && u > -1e-12 && u < 1 + 1e-12) {
          params[i].push_back(std::clamp(t, 0.0, 1.0));
          params[j].push_back(std::clamp(u, 0.0, 1.0));
        }
      } else if (std::abs(cross2(d1, dp)) <= 1e-9 * std::max(1.0, d1.norm())) {
        // Collinear overlap: exchange endpoint projections.
        for (const Pt& q : {segs[j].first, segs[j].second}) {
          double t = param_of(i, q);
          if (t > -1e-12 && t < 1 + 1e-12) params[i].push_back(std::clamp(t, 0.0, 1.0));
        }
        for (const Pt& q : {segs[i].first, segs[i].second}) {
          double t = param_of(j, q);
          if (t > -1e-12 && t < 1 + 1e-12) params[j].push_back(std::clamp(t, 0.0, 1.0));
        }
      }
    }

  // Merge split points into arrangement vertices.
  Arrangement arr;
  double eps_v = 1e-9 * std::max(1.0, half);
  auto vertex_id = [&](const Pt& p) {
    for (size_t k = 0; k < arr.vertices.size(); ++k)
      if ((arr.vertices[k] - p).lpNorm<Eigen::Infinity>() <= eps_v)
        return static_cast<int>(k);
    arr.vertices.push_back(p);
    return static_cast<int>(arr.vertices.size()) - 1;
  };
  std::set<std::pair<int, int>> edge_set;
  for (int i = 0; i < ns; ++i) {
    auto& ts = params[i];
    std::sort(ts.begin(), ts.end());
    Pt d = segs[i].second - segs[i].first;
    int prev = -1;
    double prev_t = -1.0;
    for (double t : ts) {
      if (prev >= 0 && (t - prev_t) * d.norm() <= eps_v) continue;
      int id = vertex_id(segs[i].first + t * d);
      if (prev >= 0 && id != prev)
        edge_set.insert({std::min(prev, id), std::max(prev, id)});
      prev = id;
      prev_t = t;
    }
  }
  arr.edges.assign(edge_set.begin(), edge_set.end());
  return arr;
}

std::vector<Vector> probe_points_2d(const PolyhedralGauge& g, const Matrix& pts) {
  BoxSpec box = working_box(g, pts, nullptr);
  Arrangement arr = build_arrangement(g, pts, box);

  std::vector<Vector> probes;
  for (const Pt& v : arr.vertices) probes.push_back(make_vector({v.x(), v.y()}));
  for (const auto& e : arr.edges) {
    Pt m = 0.5 * (arr.vertices[e.first] + arr.vertices[e.second]);
    probes.push_back(make_vector({m.x(), m.y()}));
  }

  // Wedge probes: a point slightly inside every face incident to each vertex.
  const int nv = static_cast<int>(arr.vertices.size());
  std::vector<std::vector<int>> incident(nv);
  for (size_t e = 0; e < arr.edges.size(); ++e) {
    incident[arr.edges[e].first].push_back(static_cast<int>(e));
    incident[arr.edges[e].second].push_back(static_cast<int>(e));
  }
  for (int v = 0; v < nv; ++v) {
    if (incident[v].empty()) continue;
    double r = std::numeric_limits<double>::infinity();
    for (int u = 0; u < nv; ++u)
      if (u != v)
        r = std::min(r, (arr.vertices[u] - arr.vertices[v]).norm());
    for (size_t e = 0; e < arr.edges.size(); ++e) {
      if (arr.edges[e].first == v || arr.edges[e].second == v) continue;
      r = std::min(r, point_seg_dist(arr.vertices[v], arr.vertices[arr.edges[e].first],
                                     arr.vertices[arr.edges[e].second]));
    }
    if (!std::isfinite(r) || r < 1e-12) continue;
    std::vector<double> angles;
    for (int e : incident[v]) {
      int other = arr.edges[e].first == v ? arr.edges[e].second : arr.edges[e].first;
      Pt d = arr.vertices[other] - arr.vertices[v];
      angles.push_back(std::atan2(d.y(), d.x()));
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                 angles.end());
    const size_t na = angles.size();
    for (size_t i = 0; i < na; ++i) {
      double a0 = angles[i];
      double a1 = i + 1 < na ? angles[i + 1] : angles[0] + 2 * M_PI;
      double gap = a1 - a0;
      if (gap < 1e-6) continue;
      double mid = a0 + 0.5 * gap;
      Pt p = arr.vertices[v] + 0.45 * r * Pt(std::cos(mid), std::sin(mid));
      probes.push_back(make_vector({p.x(), p.y()}));
    }
  }
  return probes;
}

}  // namespace

CellComplex enumerate_cells(const PolyhedralGauge& g, const Matrix& A) {
  const int d = g.dim();
  if (d > 2)
    throw InvalidInput("cells: only dimensions 1 and 2 are supported");
  CellComplex out;
  out.points = distinct_points(A);

  std::vector<Vector> probes = d == 1 ? probe_points_1d(out.points)
                                      : probe_points_2d(g, out.points);

  std::map<std::vector<std::vector<int>>, int> seen;
  for (const Vector& x : probes) {
    auto fam = family_at(g, out.points, x);
    if (seen.count(fam)) continue;
    seen[fam] = 1;
    out.cells.push_back(elementary_cell_at(g, out.points, x));
  }
  std::sort(out.cells.begin(), out.cells.end(),
            [](const ElementaryCell& a, const ElementaryCell& b) {
              if (a.dim != b.dim) return a.dim < b.dim;
              return a.family < b.family;
            });
  return out;
}

Region elementary_hull(const PolyhedralGauge& g, const Matrix& A) {
  Region r;
  for (auto& c : enumerate_cells(g, A).cells)
    if (c.bounded) r.cells.push_back(std::move(c));
  return r;
}

bool ehull_contains(const PolyhedralGauge& g, const Matrix& A, const Vector& x) {
  return elementary_cell_at(g, A, x).bounded;
}

bool ehull_monotone_check(const PolyhedralGauge& g, const Matrix& D,
                          const Matrix& A) {
  Region hull = elementary_hull(g, D);
  for (const auto& cell : hull.cells) {
    if (!ehull_contains(g, A, cell.rep)) return false;
    for (const auto& v : cell.vertices)
      if (!ehull_contains(g, A, v)) return false;
  }
  return true;
}

LinearityResult linearity_check(const PolyhedralGauge& g, const Matrix& D,
                                const Vector& w) {
  LinearityResult out{};
  Vector combo = Vector::Zero(g.dim());
  double sum = 0.0;
  for (int i = 0; i < D.rows(); ++i) {
    combo += w[i] * D.row(i).transpose();
    sum += w[i] * g.eval(D.row(i).transpose());
  }
  out.additive = std::abs(g.eval(combo) - sum) <= rel_tol(sum, 10 * g.tol());

  lp::Model mdl;
  std::vector<int> p(g.dim());
  for (int k = 0; k < g.dim(); ++k) p[k] = mdl.add_var(0.0, true);
  for (int i = 0; i < D.rows(); ++i) {
    auto face = subdifferential(g, D.row(i).transpose());
    std::vector<int> mu(face.indices.size());
    for (size_t j = 0; j < face.indices.size(); ++j) mu[j] = mdl.add_var(0.0);
    std::vector<lp::Model::Term> ones;
    for (int v : mu) ones.push_back({v, 1.0});
    mdl.add_eq(ones, 1.0);
    for (int k = 0; k < g.dim(); ++k) {
      std::vector<lp::Model::Term> terms{{p[k], -1.0}};
      for (size_t j = 0; j < face.indices.size(); ++j)
        terms.push_back({mu[j], face.generators(static_cast<int>(j), k)});
      mdl.add_eq(terms, 0.0);
    }
  }
  out.common_subgradient = mdl.minimize().status == lp::Status::optimal;
  return out;
}

bool norm_eh_in_cl_check(const PolyhedralGauge& g, const WeightedSample& Dw,
                         const std::vector<Vector>& probes) {
  if (!g.is_norm())
    throw InvalidInput("norm_eh_in_cl_check: gauge is not symmetric");
  WeightedSample D = merge_coincident(Dw);
  const double wD = D.total_weight();
  double scale = std::max(1.0, D.points.lpNorm<Eigen::Infinity>());

  for (const Vector& m : probes) {
    if (!ehull_contains(g, D.points, m)) continue;

    int at = -1;
    for (int i = 0; i < D.size(); ++i)
      if ((m - D.point(i)).norm() <= 1e-12 * scale) at = i;
    if (at >= 0) {
      double wc = wD - D.weights[at];
      if (!(wc < wD) || !is_fw_point(g, D.with_point(m, wc), m)) return false;
      continue;
    }

    Vector sum = Vector::Zero(g.dim());
    for (int i = 0; i < D.size(); ++i) {
      auto face = subdifferential(g, Vector(m - D.point(i)));
      Vector pbar = face.generators.colwise().mean().transpose();
      sum += D.weights[i] * pbar;
    }
    if (sum.norm() <= 1e-12 * wD) {
      if (!is_fw_point(g, D.with_point(m, 0.5 * wD), m)) return false;
      continue;
    }
    double wc = g.dual_eval(-sum);
    if (!(wc < wD - rel_tol(wD, g.tol()))) return false;
    Vector u = -sum / wc;
    auto active = g.active_primal(u);
    Vector q = Vector::Zero(g.dim());
    for (int j : active) q += g.primal_vertices().row(j).transpose();
    q /= static_cast<double>(active.size());
    Vector c = m - q;
    if (!is_fw_point(g, D.with_point(c, wc), m)) return false;
  }
  return true;
}

double cell_distance(const ElementaryCell& a, const ElementaryCell& b) {
  auto as_pt = [](const Vector& v) {
    return Pt(v[0], v.size() > 1 ? v[1] : 0.0);
  };
  auto features = [&](const ElementaryCell& c) {
    std::vector<std::pair<Pt, Pt>> segs;
    const int n = static_cast<int>(c.vertices.size());
    if (n == 1) segs.push_back({as_pt(c.vertices[0]), as_pt(c.vertices[0])});
    if (n == 2) segs.push_back({as_pt(c.vertices[0]), as_pt(c.vertices[1])});
    if (n >= 3)
      for (int i = 0; i < n; ++i)
        segs.push_back({as_pt(c.vertices[i]), as_pt(c.vertices[(i + 1) % n])});
    return segs;
  };
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s1 : features(a))
    for (const auto& s2 : features(b))
      best = std::min(best, seg_seg_dist(s1.first, s1.second, s2.first, s2.second));
  return best;
}

}  // namespace fwg::cells
