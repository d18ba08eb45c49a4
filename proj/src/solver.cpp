#include "fwg/solver.hpp"

#include <cmath>
#include <limits>

#include "fwg/lp.hpp"

namespace fwg {

double fw_objective(const PolyhedralGauge& g, const WeightedSample& s,
                    const Vector& x) {
  double f = 0.0;
  for (int i = 0; i < s.size(); ++i)
    f += s.weights[i] * g.eval(x - s.point(i));
  return f;
}

double fw_objective(const BlackBoxGauge& g, const WeightedSample& s,
                    const Vector& x) {
  double f = 0.0;
  for (int i = 0; i < s.size(); ++i)
    f += s.weights[i] * g.eval(x - s.point(i));
  return f;
}

namespace {

bool near_zero(const Vector& z, double scale) {
  return z.lpNorm<Eigen::Infinity>() <= 1e-12 * std::max(1.0, scale);
}

// Active dual-vertex indices per sample point at x (all for x == a).
std::vector<std::vector<int>> active_sets(const PolyhedralGauge& g,
                                          const WeightedSample& s,
                                          const Vector& x) {
  std::vector<std::vector<int>> act(s.size());
  double scale = std::max(x.lpNorm<Eigen::Infinity>(),
                          s.points.lpNorm<Eigen::Infinity>());
  for (int i = 0; i < s.size(); ++i) {
    Vector z = x - s.point(i);
    if (near_zero(z, scale)) {
      act[i].resize(g.dual_vertices().rows());
      for (int j = 0; j < g.dual_vertices().rows(); ++j) act[i][j] = j;
    } else {
      act[i] = g.active_dual(z);
    }
  }
  return act;
}

}  // namespace

std::optional<Certificate> is_fw_point(const PolyhedralGauge& g,
                                       const WeightedSample& s,
                                       const Vector& x) {
  s.validate();
  if (x.size() != g.dim() || s.dim() != g.dim())
    throw InvalidInput("solver: dimension mismatch");
  auto act = active_sets(g, s, x);

  lp::Model mdl;
  std::vector<std::vector<int>> lambda(s.size());
  for (int i = 0; i < s.size(); ++i)
    for (size_t j = 0; j < act[i].size(); ++j)
      lambda[i].push_back(mdl.add_var(0.0, false));
  for (int i = 0; i < s.size(); ++i) {
    std::vector<lp::Model::Term> ones;
    for (int v : lambda[i]) ones.push_back({v, 1.0});
    mdl.add_eq(ones, 1.0);
  }
  for (int k = 0; k < g.dim(); ++k) {
    std::vector<lp::Model::Term> terms;
    for (int i = 0; i < s.size(); ++i)
      for (size_t j = 0; j < act[i].size(); ++j)
        terms.push_back(
            {lambda[i][j], s.weights[i] * g.dual_vertices()(act[i][j], k)});
    mdl.add_eq(terms, 0.0);
  }
  auto r = mdl.minimize();
  if (r.status != lp::Status::optimal) return std::nullopt;

  Certificate cert;
  Vector sum = Vector::Zero(g.dim());
  for (int i = 0; i < s.size(); ++i)
    for (size_t j = 0; j < act[i].size(); ++j) {
      double l = r.x[lambda[i][j]];
      if (l > 1e-12)
        cert.entries.push_back({i, act[i][j], l});
      sum += s.weights[i] * l * g.dual_vertices().row(act[i][j]).transpose();
    }
  cert.residual = sum.norm();
  if (cert.residual > 1e-6 * s.total_weight())
    return std::nullopt;
  return cert;
}

std::pair<Vector, double> solve_fw_lp_point(const PolyhedralGauge& g,
                                            const WeightedSample& s) {
  s.validate();
  if (s.dim() != g.dim()) throw InvalidInput("solver: dimension mismatch");

  lp::Model mdl;
  std::vector<int> xv(g.dim());
  for (int k = 0; k < g.dim(); ++k) xv[k] = mdl.add_var(0.0, true);
  std::vector<int> tv(s.size());
  for (int i = 0; i < s.size(); ++i) tv[i] = mdl.add_var(s.weights[i], true);
  const Matrix& P = g.dual_vertices();
  for (int i = 0; i < s.size(); ++i) {
    for (int j = 0; j < P.rows(); ++j) {
      // t_i >= <p_j, x - a_i>
      std::vector<lp::Model::Term> terms{{tv[i], 1.0}};
      for (int k = 0; k < g.dim(); ++k) terms.push_back({xv[k], -P(j, k)});
      mdl.add_ge(terms, -P.row(j).dot(s.points.row(i)));
    }
  }
  auto r = mdl.minimize();
  if (r.status == lp::Status::unbounded)
    throw InternalError("solver: Fermat-Weber LP unbounded (invalid gauge)");
  if (r.status != lp::Status::optimal)
    throw InternalError("solver: Fermat-Weber LP infeasible");

  Vector x(g.dim());
  for (int k = 0; k < g.dim(); ++k) x[k] = r.x[xv[k]];
  double obj = fw_objective(g, s, x);
  if (std::abs(r.objective - obj) > 1e-8 * std::max(1.0, std::abs(obj)))
    throw InternalError("solver: LP objective disagrees with direct evaluation");
  return {x, obj};
}

FWSolution solve_fw_lp(const PolyhedralGauge& g, const WeightedSample& s) {
  auto [x, obj] = solve_fw_lp_point(g, s);
  FWSolution sol;
  sol.optimizer = x;
  sol.objective = obj;
  auto cert = is_fw_point(g, s, sol.optimizer);
  if (!cert)
    throw InternalError("solver: LP optimum failed the optimality test");
  sol.certificate = *cert;
  sol.unique = fw_uniqueness(g, s, sol.optimizer);
  return sol;
}

Uniqueness fw_uniqueness(const PolyhedralGauge& g, const WeightedSample& s,
                         const Vector& x_star) {
  auto cert = is_fw_point(g, s, x_star);
  if (!cert) throw PreconditionError("uniqueness: point is not optimal");

  auto act = active_sets(g, s, x_star);
  const Matrix& P = g.dual_vertices();
  const double wA = s.total_weight();
  double f_star = fw_objective(g, s, x_star);

  std::vector<Vector> probes;
  for (int i = 0; i < g.primal_vertices().rows(); ++i) {
    Vector u = g.primal_vertices().row(i);
    u.normalize();
    probes.push_back(u);
    probes.push_back(-u);
  }

  bool all_positive = true;
  for (const Vector& u : probes) {
    double deriv = 0.0;
    for (int i = 0; i < s.size(); ++i) {
      double m = -std::numeric_limits<double>::infinity();
      for (int j : act[i]) m = std::max(m, P.row(j).dot(u));
      deriv += s.weights[i] * m;
    }
    if (deriv > rel_tol(wA, g.tol())) continue;
    all_positive = false;

    // Flat direction: step to just before the first breakpoint of the
    // piecewise-linear objective and confirm a distinct optimizer there.
    double T = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.size(); ++i) {
      Vector z = x_star - s.point(i);
      if (near_zero(z, x_star.lpNorm<Eigen::Infinity>())) continue;
      double gz = g.eval(z);
      double slope = -std::numeric_limits<double>::infinity();
      for (int j : act[i]) slope = std::max(slope, P.row(j).dot(u));
      for (int j = 0; j < P.rows(); ++j) {
        double sj = P.row(j).dot(u);
        if (sj > slope + 1e-12) {
          double t = (gz - P.row(j).dot(z)) / (sj - slope);
          if (t > 1e-12) T = std::min(T, t);
        }
      }
    }
    if (!std::isfinite(T)) return Uniqueness::unknown;
    Vector y = x_star + 0.5 * T * u;
    double fy = fw_objective(g, s, y);
    if (std::abs(fy - f_star) <= rel_tol(f_star, 10 * g.tol()) &&
        is_fw_point(g, s, y))
      return Uniqueness::no;
    return Uniqueness::unknown;
  }
  return all_positive ? Uniqueness::yes : Uniqueness::unknown;
}

namespace {

FWSolution weiszfeld(const BlackBoxGauge& g, const WeightedSample& s,
                     int iterations) {
  const double wA = s.total_weight();
  const double scale = std::max(1.0, s.points.lpNorm<Eigen::Infinity>());
  Vector x = Vector::Zero(s.dim());
  for (int i = 0; i < s.size(); ++i)
    x += s.weights[i] * s.point(i);
  x /= wA;

  Vector residual = Vector::Zero(s.dim());
  for (int it = 0; it < iterations; ++it) {
    // Detect coincidence with a sample point.
    int hit = -1;
    for (int i = 0; i < s.size(); ++i)
      if ((x - s.point(i)).norm() <= 1e-13 * scale) hit = i;
    if (hit >= 0) {
      Vector R = Vector::Zero(s.dim());
      for (int i = 0; i < s.size(); ++i) {
        if (i == hit) continue;
        Vector z = x - s.point(i);
        R += s.weights[i] * z / z.norm();
      }
      if (R.norm() <= s.weights[hit] + 1e-14 * wA) {
        residual = Vector::Zero(s.dim());
        break;
      }
      x -= (R.norm() - s.weights[hit]) / wA * 1e-6 * scale * (R / R.norm());
      continue;
    }
    Vector num = Vector::Zero(s.dim());
    double den = 0.0;
    residual = Vector::Zero(s.dim());
    for (int i = 0; i < s.size(); ++i) {
      Vector z = x - s.point(i);
      double n = z.norm();
      num += s.weights[i] * s.point(i) / n;
      den += s.weights[i] / n;
      residual += s.weights[i] * z / n;
    }
    if (residual.norm() <= 1e-10 * wA) break;
    x = num / den;
  }

  FWSolution sol;
  sol.optimizer = x;
  sol.objective = fw_objective(g, s, x);
  sol.certificate.residual = [&] {
    int hit = -1;
    for (int i = 0; i < s.size(); ++i)
      if ((x - s.point(i)).norm() <= 1e-13 * scale) hit = i;
    Vector R = Vector::Zero(s.dim());
    for (int i = 0; i < s.size(); ++i) {
      if (i == hit) continue;
      Vector z = x - s.point(i);
      R += s.weights[i] * z / z.norm();
    }
    if (hit >= 0) return std::max(0.0, R.norm() - s.weights[hit]);
    return R.norm();
  }();
  sol.unique = Uniqueness::unknown;
  return sol;
}

}  // namespace

FWSolution solve_fw_subgradient(const BlackBoxGauge& g, const WeightedSample& s,
                                const SubgradientOptions& opt) {
  s.validate();
  if (s.dim() != g.dim()) throw InvalidInput("solver: dimension mismatch");
  if (opt.iterations < 1) throw InvalidInput("solver: iterations must be >= 1");

  if (g.kind() == BlackBoxGauge::Kind::euclidean)
    return weiszfeld(g, s, opt.iterations);

  const double wA = s.total_weight();
  Vector x = Vector::Zero(s.dim());
  for (int i = 0; i < s.size(); ++i) x += s.weights[i] * s.point(i);
  x /= wA;

  double f0 = fw_objective(g, s, x);
  double c = opt.step_scale > 0 ? opt.step_scale : f0 / (wA * g.skewness());
  if (c <= 0 || !std::isfinite(c)) c = 1.0;

  Vector best = x;
  double f_best = f0;
  for (int k = 1; k <= opt.iterations; ++k) {
    Vector sub = Vector::Zero(s.dim());
    for (int i = 0; i < s.size(); ++i)
      sub += s.weights[i] * g.subgradient(x - s.point(i));
    double nrm = sub.norm();
    if (nrm <= 1e-14) {
      best = x;
      break;
    }
    x -= (c / std::sqrt(static_cast<double>(k))) * sub / nrm;
    double f = fw_objective(g, s, x);
    if (f > 10.0 * f0 && f > 10.0 * f_best)
      throw InternalError("solver: subgradient descent diverged");
    if (f < f_best) {
      f_best = f;
      best = x;
    }
  }

  if (opt.polish) {
    // Cutting-plane refinement: the black-box objective is convex, so the
    // model built from (value, subgradient) pairs is a lower bound; on
    // piecewise-linear instances the gap closes finitely.
    double r = 2.0 * (s.diameter() + 1.0);
    Vector lo = best.array() - r;
    Vector hi = best.array() + r;
    std::vector<Vector> pts;
    std::vector<double> vals;
    std::vector<Vector> grads;
    Vector q = best;
    for (int it = 0; it < 400; ++it) {
      double fq = fw_objective(g, s, q);
      Vector gq = Vector::Zero(s.dim());
      for (int i = 0; i < s.size(); ++i)
        gq += s.weights[i] * g.subgradient(q - s.point(i));
      if (fq < f_best) {
        f_best = fq;
        best = q;
      }
      pts.push_back(q);
      vals.push_back(fq);
      grads.push_back(gq);

      lp::Model mdl;
      std::vector<int> xv(s.dim());
      for (int k = 0; k < s.dim(); ++k) xv[k] = mdl.add_var(0.0, true);
      int t = mdl.add_var(1.0, true);
      for (size_t i = 0; i < pts.size(); ++i) {
        std::vector<lp::Model::Term> terms{{t, 1.0}};
        for (int k = 0; k < s.dim(); ++k) terms.push_back({xv[k], -grads[i][k]});
        mdl.add_ge(terms, vals[i] - grads[i].dot(pts[i]));
      }
      for (int k = 0; k < s.dim(); ++k) {
        mdl.add_le({{xv[k], 1.0}}, hi[k]);
        mdl.add_ge({{xv[k], 1.0}}, lo[k]);
      }
      auto rr = mdl.minimize();
      if (rr.status != lp::Status::optimal)
        throw InternalError("solver: cutting-plane model failed");
      Vector xm(s.dim());
      for (int k = 0; k < s.dim(); ++k) xm[k] = rr.x[xv[k]];
      double model_min = rr.objective;
      if (f_best - model_min <= 1e-10 * std::max(1.0, f_best)) {
        q = xm;
        double fq2 = fw_objective(g, s, q);
        if (fq2 < f_best) {
          f_best = fq2;
          best = q;
        }
        break;
      }
      q = xm;
    }
  }

  FWSolution sol;
  sol.optimizer = best;
  sol.objective = f_best;
  sol.certificate.residual = std::numeric_limits<double>::quiet_NaN();
  sol.unique = Uniqueness::unknown;
  return sol;
}

bool skew_line_fw_check(const PolyhedralGauge& g, const std::vector<double>& taus,
                        const Vector& base) {
  if (taus.empty()) throw InvalidInput("skew-line check: empty sample");
  for (size_t i = 1; i < taus.size(); ++i)
    if (taus[i] < taus[i - 1])
      throw InvalidInput("skew-line check: taus must be sorted");
  Vector v = g.skew_dir();
  const int n = static_cast<int>(taus.size());
  const double sigma = g.skewness();
  int ell = static_cast<int>(
      std::ceil(static_cast<double>(n) / (1.0 + sigma) - 1e-12));
  ell = std::max(1, ell);

  WeightedSample s;
  s.points.resize(n, g.dim());
  s.weights = Vector::Ones(n);
  for (int i = 0; i < n; ++i)
    s.points.row(i) = (base + taus[i] * v).transpose();
  Vector cand = base + taus[ell - 1] * v;
  return is_fw_point(g, s, cand).has_value();
}

ThreePointWitness euclid_three_point_witness(const Vector& a, const Vector& b,
                                             const Vector& m, double rho,
                                             double w_a, double w_b) {
  if (rho <= 0) throw InvalidInput("three-point witness: rho must be positive");
  Vector ma = m - a, mb = m - b, ba = b - a;
  double na = ma.norm(), nb = mb.norm();
  if (na < 1e-14 || nb < 1e-14)
    throw InvalidInput("three-point witness: m coincides with a or b");
  // m must be off the line through a and b.
  double t = ba.squaredNorm() > 0 ? ma.dot(ba) / ba.squaredNorm() : 0.0;
  if ((ma - t * ba).norm() <= 1e-10 * std::max(1.0, ba.norm()))
    throw InvalidInput("three-point witness: m is collinear with a and b");

  ThreePointWitness out;
  Vector v_ab = w_a * ma / na + w_b * mb / nb;
  out.w_c = v_ab.norm();
  // c sits on the ray from m along v_ab so that the unit pull towards c
  // cancels v_ab exactly.
  out.c = m + rho * v_ab;
  Vector mc = m - out.c;
  out.residual = (v_ab + out.w_c * (mc / mc.norm())).norm();
  out.verified = out.residual <= 1e-8 && out.w_c < w_a + w_b - 1e-12;
  return out;
}

}  // namespace fwg
