#include "fwg/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "fwg/lp.hpp"

namespace fwg {
namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Strict convex hull in ccw order (collinear points dropped).
std::vector<Eigen::Vector2d> hull2(const Matrix& pts) {
  std::vector<Eigen::Vector2d> p;
  p.reserve(pts.rows());
  for (int i = 0; i < pts.rows(); ++i) p.emplace_back(pts(i, 0), pts(i, 1));
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  p.erase(std::unique(p.begin(), p.end(),
                      [](const auto& a, const auto& b) {
                        return (a - b).norm() < 1e-12;
                      }),
          p.end());
  const int n = static_cast<int>(p.size());
  if (n < 3) throw InvalidInput("gauge: ball is not full-dimensional");
  std::vector<Eigen::Vector2d> h(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 1e-12)
      --k;
    h[k++] = p[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross2(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 1e-12)
      --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

Matrix polar1(const Matrix& verts) {
  double lo = verts.col(0).minCoeff();
  double hi = verts.col(0).maxCoeff();
  if (!(lo < 0.0 && hi > 0.0))
    throw InvalidInput("gauge: origin not in the interior of the unit ball");
  Matrix out(2, 1);
  out << 1.0 / hi, 1.0 / lo;
  return out;
}

Matrix polar2(const Matrix& verts) {
  auto h = hull2(verts);
  const int n = static_cast<int>(h.size());
  // Origin strictly inside: strictly left of every ccw edge.
  for (int i = 0; i < n; ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % n];
    if (cross2(b - a, -a) <= 1e-12)
      throw InvalidInput("gauge: origin not in the interior of the unit ball");
  }
  Matrix out(n, 2);
  for (int i = 0; i < n; ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % n];
    Eigen::Matrix2d M;
    M << a.x(), a.y(), b.x(), b.y();
    Eigen::Vector2d p = M.partialPivLu().solve(Eigen::Vector2d(1.0, 1.0));
    out.row(i) = p.transpose();
  }
  return out;
}

// Facet enumeration by plane search; adequate for the small vertex counts
// this library deals with.
Matrix polar3(const Matrix& verts_in, double tol) {
  std::vector<Vector> verts;
  for (int i = 0; i < verts_in.rows(); ++i) {
    Vector v = verts_in.row(i);
    bool dup = false;
    for (const auto& u : verts)
      if ((u - v).norm() < 1e-12) dup = true;
    if (!dup) verts.push_back(v);
  }
  const int n = static_cast<int>(verts.size());
  if (n < 4) throw InvalidInput("gauge: ball is not full-dimensional");
  std::vector<Vector> normals;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Eigen::Matrix3d M;
        M.row(0) = verts[i];
        M.row(1) = verts[j];
        M.row(2) = verts[k];
        if (std::abs(M.determinant()) < 1e-12) continue;
        Eigen::Vector3d nrm =
            M.partialPivLu().solve(Eigen::Vector3d::Ones());
        bool facet = true;
        for (int t = 0; t < n && facet; ++t)
          if (nrm.dot(verts[t]) > 1.0 + rel_tol(1.0, tol) * 10) facet = false;
        if (!facet) continue;
        bool dup = false;
        for (const auto& m : normals)
          if ((m - Vector(nrm)).norm() < 1e-9) dup = true;
        if (!dup) normals.push_back(nrm);
      }
  if (normals.empty())
    throw InvalidInput("gauge: origin not in the interior of the unit ball");
  Matrix out(static_cast<int>(normals.size()), 3);
  for (int i = 0; i < static_cast<int>(normals.size()); ++i)
    out.row(i) = normals[i];
  return out;
}

void sort_rows_lex(Matrix& m) {
  std::vector<int> idx(m.rows());
  for (int i = 0; i < m.rows(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    for (int k = 0; k < m.cols(); ++k) {
      if (m(a, k) < m(b, k) - 1e-12) return true;
      if (m(a, k) > m(b, k) + 1e-12) return false;
    }
    return false;
  });
  Matrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) out.row(i) = m.row(idx[i]);
  m = out;
}

}  // namespace

Matrix polar_vertices(const Matrix& vertices, double tol) {
  if (vertices.rows() == 0) throw InvalidInput("gauge: empty vertex list");
  switch (vertices.cols()) {
    case 1:
      return polar1(vertices);
    case 2:
      return polar2(vertices);
    case 3:
      return polar3(vertices, tol);
    default:
      throw InvalidInput(
          "gauge: vertex/facet conversion is only supported for dim <= 3");
  }
}

double origin_interior_margin(const Matrix& vertices) {
  const int d = static_cast<int>(vertices.cols());
  double worst = 0.0;
  for (int j = 0; j < d; ++j) {
    for (double sign : {1.0, -1.0}) {
      // maximize sign * u_j over the polar {u : <v_i,u> <= 1}; the polar is
      // bounded exactly when the origin is interior to conv(vertices).
      lp::Model mdl;
      std::vector<int> u(d);
      for (int k = 0; k < d; ++k)
        u[k] = mdl.add_var(k == j ? sign : 0.0, true);
      for (int i = 0; i < vertices.rows(); ++i) {
        std::vector<lp::Model::Term> terms;
        for (int k = 0; k < d; ++k) terms.push_back({u[k], vertices(i, k)});
        mdl.add_le(terms, 1.0);
      }
      auto r = mdl.maximize();
      if (r.status == lp::Status::unbounded) return 0.0;
      if (r.status != lp::Status::optimal)
        throw InternalError("gauge: interior-margin LP failed");
      worst = std::max(worst, r.objective);
    }
  }
  if (worst <= 0.0) return 0.0;
  return 1.0 / worst;
}

void PolyhedralGauge::finalize() {
  if (primal_.rows() == 0 || dual_.rows() == 0)
    throw InvalidInput("gauge: both vertex lists are required");
  if (primal_.cols() != dim_ || dual_.cols() != dim_)
    throw InvalidInput("gauge: vertex dimension mismatch");
  if (!primal_.allFinite() || !dual_.allFinite())
    throw InvalidInput("gauge: vertices must be finite");

  if (origin_interior_margin(primal_) <= 0.0)
    throw InvalidInput(
        "gauge: origin not in the strict interior of the unit ball");
  if (origin_interior_margin(dual_) <= 0.0)
    throw InvalidInput(
        "gauge: origin not in the strict interior of the dual unit ball");

  for (int i = 0; i < primal_.rows(); ++i) {
    double v = eval(primal_.row(i));
    if (std::abs(v - 1.0) > 1e-7)
      throw InvalidInput("gauge: primal vertex not on the unit sphere "
                         "(vertex lists are not polar-consistent)");
  }
  for (int i = 0; i < dual_.rows(); ++i) {
    double v = dual_eval(dual_.row(i));
    if (std::abs(v - 1.0) > 1e-7)
      throw InvalidInput("gauge: dual vertex not on the dual unit sphere "
                         "(vertex lists are not polar-consistent)");
  }

  // Skewness over primal vertices; directions -u/sigma for maximizers.
  skewness_ = 1.0;
  for (int i = 0; i < primal_.rows(); ++i)
    skewness_ = std::max(skewness_, eval(-primal_.row(i).transpose()));
  std::vector<Vector> dirs;
  for (int i = 0; i < primal_.rows(); ++i) {
    if (eval(-primal_.row(i).transpose()) >=
        skewness_ - rel_tol(skewness_, tol_)) {
      Vector v = -primal_.row(i).transpose() / skewness_;
      bool dup = false;
      for (const auto& u : dirs)
        if ((u - v).norm() < 1e-9) dup = true;
      if (!dup) dirs.push_back(v);
    }
  }
  skew_dirs_.resize(static_cast<int>(dirs.size()), dim_);
  for (int i = 0; i < static_cast<int>(dirs.size()); ++i)
    skew_dirs_.row(i) = dirs[i];
  sort_rows_lex(skew_dirs_);

  is_norm_ = true;
  for (int i = 0; i < primal_.rows() && is_norm_; ++i) {
    bool found = false;
    for (int j = 0; j < primal_.rows(); ++j)
      if ((primal_.row(i) + primal_.row(j)).norm() < 1e-9) found = true;
    is_norm_ = found;
  }
  if (is_norm_ && std::abs(skewness_ - 1.0) > 1e-9)
    throw InternalError("gauge: symmetric ball with skewness != 1");
}

namespace {

// Canonicalizes a supplied vertex list in dimensions 1 and 2: extreme points
// only, ccw order in the plane.
Matrix clean_vertices(const Matrix& vertices) {
  if (vertices.cols() == 1) {
    Matrix out(2, 1);
    out << vertices.col(0).maxCoeff(), vertices.col(0).minCoeff();
    return out;
  }
  if (vertices.cols() == 2) {
    auto h = hull2(vertices);
    Matrix out(static_cast<int>(h.size()), 2);
    for (int i = 0; i < static_cast<int>(h.size()); ++i)
      out.row(i) = h[i].transpose();
    return out;
  }
  return vertices;
}

}  // namespace

PolyhedralGauge PolyhedralGauge::from_primal(const Matrix& vertices,
                                             double tol) {
  PolyhedralGauge g;
  g.dim_ = static_cast<int>(vertices.cols());
  g.tol_ = tol;
  g.primal_ = clean_vertices(vertices);
  g.dual_ = polar_vertices(vertices, tol);
  g.finalize();
  return g;
}

PolyhedralGauge PolyhedralGauge::from_dual(const Matrix& vertices, double tol) {
  PolyhedralGauge g;
  g.dim_ = static_cast<int>(vertices.cols());
  g.tol_ = tol;
  g.dual_ = clean_vertices(vertices);
  g.primal_ = polar_vertices(vertices, tol);
  g.finalize();
  return g;
}

PolyhedralGauge PolyhedralGauge::from_vertices(const Matrix& primal,
                                               const Matrix& dual, double tol) {
  if (primal.cols() != dual.cols())
    throw InvalidInput("gauge: vertex dimension mismatch");
  PolyhedralGauge g;
  g.dim_ = static_cast<int>(primal.cols());
  g.tol_ = tol;
  g.primal_ = primal;
  g.dual_ = dual;
  g.finalize();
  return g;
}

double PolyhedralGauge::eval(const Vector& x) const {
  if (x.size() != dim_) throw InvalidInput("gauge: point dimension mismatch");
  return (dual_ * x).maxCoeff();
}

double PolyhedralGauge::dual_eval(const Vector& q) const {
  if (q.size() != dim_) throw InvalidInput("gauge: point dimension mismatch");
  return (primal_ * q).maxCoeff();
}

std::vector<int> PolyhedralGauge::active_dual(const Vector& x) const {
  Vector vals = dual_ * x;
  double g = vals.maxCoeff();
  double thr = g - rel_tol(g, tol_);
  std::vector<int> idx;
  for (int i = 0; i < vals.size(); ++i)
    if (vals[i] >= thr) idx.push_back(i);
  return idx;
}

std::vector<int> PolyhedralGauge::active_primal(const Vector& q) const {
  Vector vals = primal_ * q;
  double g = vals.maxCoeff();
  double thr = g - rel_tol(g, tol_);
  std::vector<int> idx;
  for (int i = 0; i < vals.size(); ++i)
    if (vals[i] >= thr) idx.push_back(i);
  return idx;
}

SubgradientFace subdifferential(const PolyhedralGauge& g, const Vector& x) {
  SubgradientFace f;
  f.at = x;
  f.indices = g.active_dual(x);
  f.generators.resize(static_cast<int>(f.indices.size()), g.dim());
  for (int i = 0; i < static_cast<int>(f.indices.size()); ++i)
    f.generators.row(i) = g.dual_vertices().row(f.indices[i]);
  return f;
}

PolyhedralGauge dual_gauge(const PolyhedralGauge& g) {
  return PolyhedralGauge::from_vertices(g.dual_vertices(), g.primal_vertices(),
                                        g.tol());
}

namespace {

// Convex-hull membership by LP feasibility.
bool in_convex_hull(const Matrix& gens, const Vector& p, double tol) {
  lp::Model mdl;
  const int n = static_cast<int>(gens.rows());
  const int d = static_cast<int>(gens.cols());
  std::vector<int> lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = mdl.add_var(0.0, false);
  std::vector<lp::Model::Term> ones;
  for (int i = 0; i < n; ++i) ones.push_back({lambda[i], 1.0});
  mdl.add_eq(ones, 1.0);
  for (int k = 0; k < d; ++k) {
    std::vector<lp::Model::Term> terms;
    for (int i = 0; i < n; ++i) terms.push_back({lambda[i], gens(i, k)});
    mdl.add_eq(terms, p[k]);
  }
  auto r = mdl.minimize();
  (void)tol;
  return r.status == lp::Status::optimal;
}

}  // namespace

bool check_skew_subdiff(const PolyhedralGauge& g, const Vector& v) {
  if (v.size() != g.dim()) throw InvalidInput("gauge: dimension mismatch");
  double gv = g.eval(v);
  if (gv <= 0.0) throw InvalidInput("gauge: zero direction");
  Vector vn = v / gv;
  double sigma = g.skewness();
  SubgradientFace fv = subdifferential(g, vn);
  SubgradientFace fm = subdifferential(g, Vector(-vn));
  for (int i = 0; i < fv.generators.rows(); ++i) {
    Vector target = -fv.generators.row(i).transpose() / sigma;
    if (!in_convex_hull(fm.generators, target, g.tol())) return false;
  }
  return true;
}

PolyhedralGauge tropical_gauge(int d, double tol) {
  if (d < 1) throw InvalidInput("tropical gauge: d must be >= 1");
  Matrix primal(d + 1, d);
  primal.setZero();
  for (int i = 0; i < d; ++i) primal(i, i) = 1.0;
  primal.row(d).setConstant(-1.0);
  Matrix dual(d + 1, d);
  dual.setOnes();
  for (int j = 0; j < d; ++j) dual(j + 1, j) = -static_cast<double>(d);
  return PolyhedralGauge::from_vertices(primal, dual, tol);
}

PolyhedralGauge quantile_gauge(double b, double tol) {
  if (!(b > 0.0 && b < 1.0))
    throw InvalidInput("quantile gauge: b must lie in (0,1)");
  Matrix primal(2, 1), dual(2, 1);
  primal << 1.0 / (1.0 - b), -1.0 / b;
  dual << 1.0 - b, -b;
  return PolyhedralGauge::from_vertices(primal, dual, tol);
}

PolyhedralGauge separable_gauge(const std::vector<double>& bs, double tol) {
  const int d = static_cast<int>(bs.size());
  if (d < 1) throw InvalidInput("separable gauge: need at least one component");
  for (double b : bs)
    if (!(b > 0.0 && b < 1.0))
      throw InvalidInput("separable gauge: each b must lie in (0,1)");
  Matrix primal(2 * d, d);
  primal.setZero();
  for (int i = 0; i < d; ++i) {
    primal(2 * i, i) = 1.0 / (1.0 - bs[i]);
    primal(2 * i + 1, i) = -1.0 / bs[i];
  }
  const int combos = 1 << d;
  Matrix dual(combos, d);
  for (int mask = 0; mask < combos; ++mask)
    for (int i = 0; i < d; ++i)
      dual(mask, i) = (mask >> i) & 1 ? -bs[i] : 1.0 - bs[i];
  return PolyhedralGauge::from_vertices(primal, dual, tol);
}

BlackBoxGauge::BlackBoxGauge(int dim, std::function<double(const Vector&)> eval,
                             std::function<Vector(const Vector&)> subgradient,
                             double skewness, Kind kind)
    : dim_(dim),
      eval_(std::move(eval)),
      subgrad_(std::move(subgradient)),
      skewness_(skewness),
      kind_(kind) {
  if (dim_ < 1) throw InvalidInput("black-box gauge: dim must be >= 1");
  if (skewness_ < 1.0)
    throw InvalidInput("black-box gauge: skewness must be >= 1");
}

BlackBoxGauge BlackBoxGauge::euclidean(int dim) {
  return BlackBoxGauge(
      dim, [](const Vector& x) { return x.norm(); },
      [](const Vector& x) {
        double n = x.norm();
        return n > 0 ? Vector(x / n) : Vector(Vector::Zero(x.size()));
      },
      1.0, Kind::euclidean);
}

BlackBoxGauge BlackBoxGauge::wrap(const PolyhedralGauge& g) {
  PolyhedralGauge copy = g;
  return BlackBoxGauge(
      g.dim(), [copy](const Vector& x) { return copy.eval(x); },
      [copy](const Vector& x) {
        return Vector(copy.dual_vertices().row(copy.active_dual(x).front()));
      },
      g.skewness(), Kind::generic);
}

}  // namespace fwg
