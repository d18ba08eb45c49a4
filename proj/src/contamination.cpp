#include "fwg/contamination.hpp"

#include <algorithm>
#include <cmath>

#include "fwg/lp.hpp"

namespace fwg::cl {

MembershipResult cl_membership(const PolyhedralGauge& g, const WeightedSample& Dw,
                               const Vector& a) {
  if (g.dim() > 2)
    throw InvalidInput("contamination: only dimensions 1 and 2 are supported");
  WeightedSample D = merge_coincident(Dw);
  D.validate();
  const double wD = D.total_weight();
  const double sigma = g.skewness();
  const double thr = wD / sigma;
  const double band = rel_tol(wD, g.tol());

  // Active faces per point; a itself may coincide with a sample point.
  double scale = std::max(a.lpNorm<Eigen::Infinity>(),
                          D.points.lpNorm<Eigen::Infinity>());
  std::vector<std::vector<int>> act(D.size());
  for (int i = 0; i < D.size(); ++i) {
    Vector z = a - D.point(i);
    if (z.lpNorm<Eigen::Infinity>() <= 1e-12 * std::max(1.0, scale)) {
      act[i].resize(g.dual_vertices().rows());
      for (int j = 0; j < g.dual_vertices().rows(); ++j) act[i][j] = j;
    } else {
      act[i] = g.active_dual(z);
    }
  }

  // min s  s.t.  dual(-p) <= s,  p = sum_i w_i sum_j lambda_ij p_j.
  lp::Model mdl;
  int s_var = mdl.add_var(1.0, false);
  std::vector<std::vector<int>> lambda(D.size());
  for (int i = 0; i < D.size(); ++i) {
    for (size_t j = 0; j < act[i].size(); ++j)
      lambda[i].push_back(mdl.add_var(0.0, false));
    std::vector<lp::Model::Term> ones;
    for (int v : lambda[i]) ones.push_back({v, 1.0});
    mdl.add_eq(ones, 1.0);
  }
  const Matrix& U = g.primal_vertices();
  const Matrix& P = g.dual_vertices();
  for (int u = 0; u < U.rows(); ++u) {
    // <-p, u> <= s
    std::vector<lp::Model::Term> terms{{s_var, 1.0}};
    for (int i = 0; i < D.size(); ++i)
      for (size_t j = 0; j < act[i].size(); ++j)
        terms.push_back(
            {lambda[i][j], D.weights[i] * P.row(act[i][j]).dot(U.row(u))});
    mdl.add_ge(terms, 0.0);
  }
  auto r = mdl.minimize();
  if (r.status != lp::Status::optimal)
    throw InternalError("contamination: membership LP failed");

  MembershipResult out;
  out.threshold = thr;
  out.min_dual = r.objective;
  if (out.min_dual > thr + band) {
    out.verdict = Verdict::out;
    return out;
  }
  if (out.min_dual >= thr - band) {
    out.verdict = Verdict::indeterminate;
    return out;
  }

  out.verdict = Verdict::in;
  Vector p = Vector::Zero(g.dim());
  for (int i = 0; i < D.size(); ++i)
    for (size_t j = 0; j < act[i].size(); ++j)
      p += D.weights[i] * r.x[lambda[i][j]] * P.row(act[i][j]).transpose();
  Vector q = -p;
  double wq = g.dual_eval(q);
  Witness w;
  if (wq <= band) {
    w.e = a;
    w.w_e = 0.5 * thr;
  } else {
    auto active = g.active_primal(q);
    Vector u = Vector::Zero(g.dim());
    for (int j : active) u += U.row(j).transpose();
    u /= static_cast<double>(active.size());
    w.e = a - u;
    w.w_e = wq;
  }
  if (!is_fw_point(g, D.with_point(w.e, w.w_e), a))
    throw InternalError("contamination: witness failed the optimality test");
  out.witness = w;
  return out;
}

SelfContamination self_contamination_check(const PolyhedralGauge& g,
                                           const WeightedSample& Dw,
                                           const Vector& a,
                                           std::optional<double> weight) {
  WeightedSample D = merge_coincident(Dw);
  double wa = weight.value_or(D.total_weight() / g.skewness());
  WeightedSample s = D.with_point(a, wa);
  SelfContamination out;
  auto cert = is_fw_point(g, s, a);
  out.median = cert.has_value();
  if (out.median) out.uniqueness = fw_uniqueness(g, s, a);
  return out;
}

CLRegion contamination_locus(const PolyhedralGauge& g, const WeightedSample& Dw) {
  WeightedSample D = merge_coincident(Dw);
  CLRegion out;
  out.complex = cells::enumerate_cells(g, D.points);

  out.min_dual.resize(out.complex.cells.size(), 0.0);
  out.witness.resize(out.complex.cells.size());
  bool accepted_all_bounded = true;
  for (size_t i = 0; i < out.complex.cells.size(); ++i) {
    const auto& cell = out.complex.cells[i];
    auto res = cl_membership(g, D, cell.rep);
    out.min_dual[i] = res.min_dual;
    if (!cell.bounded) {
      // the locus is a union of bounded cells; an unbounded cell is out even
      // when its membership LP sits on the threshold
      out.rejected.push_back(static_cast<int>(i));
      continue;
    }
    switch (res.verdict) {
      case Verdict::in:
        out.accepted.push_back(static_cast<int>(i));
        out.witness[i] = res.witness;
        if (!cell.bounded) accepted_all_bounded = false;
        break;
      case Verdict::out:
        out.rejected.push_back(static_cast<int>(i));
        break;
      case Verdict::indeterminate:
        out.indeterminate.push_back(static_cast<int>(i));
        break;
    }
  }

  // Sandwich: the uncontaminated optimizer's cell must be accepted, and
  // accepted cells must be bounded (hence inside the elementary hull).
  auto fw = solve_fw_lp_point(g, D);
  auto fam = cells::family_at(g, out.complex.points, fw.first);
  bool fw_cell_accepted = false;
  for (int idx : out.accepted)
    if (out.complex.cells[idx].family == fam) fw_cell_accepted = true;
  out.sandwich_ok = fw_cell_accepted && accepted_all_bounded;

  // Connectedness of the accepted union via pairwise feature distance.
  if (!out.accepted.empty()) {
    double scale = std::max(1.0, D.points.lpNorm<Eigen::Infinity>());
    double eps = 1e-7 * scale;
    const int n = static_cast<int>(out.accepted.size());
    std::vector<bool> reach(n, false);
    std::vector<int> stack{0};
    reach[0] = true;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (reach[j]) continue;
        if (cells::cell_distance(out.complex.cells[out.accepted[cur]],
                                 out.complex.cells[out.accepted[j]]) <= eps) {
          reach[j] = true;
          stack.push_back(j);
        }
      }
    }
    out.connected = std::all_of(reach.begin(), reach.end(), [](bool b) { return b; });
  } else {
    out.connected = true;
  }
  return out;
}

std::pair<double, double> quantile_cl(const std::vector<double>& d_sorted,
                                      const std::vector<double>& w, double b) {
  if (d_sorted.empty() || d_sorted.size() != w.size())
    throw InvalidInput("quantile_cl: bad input sizes");
  for (size_t i = 1; i < d_sorted.size(); ++i)
    if (!(d_sorted[i] > d_sorted[i - 1]))
      throw InvalidInput("quantile_cl: points must be strictly increasing");
  if (!(b > 0.0 && b < 0.5))
    throw InvalidInput("quantile_cl: b must lie in (0, 1/2)");

  const int n = static_cast<int>(d_sorted.size());
  double wD = 0.0;
  for (double x : w) wD += x;
  const double thr = (1.0 - 2.0 * b) / (1.0 - b) * wD;

  // k with suffix(k+1) <= thr < suffix(k), 1-based.
  double suffix = 0.0;
  int k = n;
  for (int i = n - 1; i >= 0; --i) {
    double with_i = suffix + w[i];
    if (suffix <= thr + 1e-12 * wD && with_i > thr + 1e-12 * wD) {
      k = i + 1;
      break;
    }
    suffix = with_i;
  }
  return {d_sorted.front(), d_sorted[k - 1]};
}

TropicalBalance tropical_median_check(const WeightedSample& s, const Vector& m) {
  if (s.dim() != 2 || m.size() != 2)
    throw InvalidInput("tropical median check: dimension must be 2");
  static const PolyhedralGauge trop = tropical_gauge(2);

  TropicalBalance out;
  out.total_weight = s.total_weight();
  double scale = std::max(m.lpNorm<Eigen::Infinity>(),
                          s.points.lpNorm<Eigen::Infinity>());
  // Dual vertex order of tropical_gauge(2): (1,1), (-2,1), (1,-2); a point a
  // lies in region lower-left/lower-right/upper exactly when the respective
  // vertex is active at m - a.
  for (int i = 0; i < s.size(); ++i) {
    Vector z = m - s.point(i);
    std::vector<int> act;
    bool at_m = z.lpNorm<Eigen::Infinity>() <= 1e-12 * std::max(1.0, scale);
    if (at_m) {
      act = {0, 1, 2};
      out.m_weight += s.weights[i];
    } else {
      act = trop.active_dual(z);
    }
    for (int j : act) {
      out.inclusive[j] += s.weights[i];
      if (!at_m && act.size() > 1) out.boundary[j] += s.weights[i];
    }
    if (act.size() == 1) out.interior[act[0]] += s.weights[i];
  }
  const double third = out.total_weight / 3.0;
  const double eps = 1e-9 * std::max(1.0, out.total_weight);
  out.balanced = true;
  for (int j = 0; j < 3; ++j) {
    if (out.inclusive[j] < third - eps) out.balanced = false;
    if (out.interior[j] > third + eps) out.balanced = false;
  }
  return out;
}

BruteForceCL cl_bruteforce_oracle(const PolyhedralGauge& g,
                                  const WeightedSample& Dw, const Vector& lo,
                                  const Vector& hi, int steps, int weight_steps) {
  if (steps < 1 || weight_steps < 0)
    throw InvalidInput("brute-force oracle: bad grid sizes");
  WeightedSample D = merge_coincident(Dw);
  const double thr = D.total_weight() / g.skewness();
  const int d = g.dim();

  std::vector<Vector> grid;
  if (d == 1) {
    for (int i = 0; i < steps; ++i) {
      double t = steps == 1 ? 0.5 : static_cast<double>(i) / (steps - 1);
      grid.push_back(make_vector({lo[0] + t * (hi[0] - lo[0])}));
    }
  } else if (d == 2) {
    for (int i = 0; i < steps; ++i)
      for (int j = 0; j < steps; ++j) {
        double tx = steps == 1 ? 0.5 : static_cast<double>(i) / (steps - 1);
        double ty = steps == 1 ? 0.5 : static_cast<double>(j) / (steps - 1);
        grid.push_back(make_vector(
            {lo[0] + tx * (hi[0] - lo[0]), lo[1] + ty * (hi[1] - lo[1])}));
      }
  } else {
    throw InvalidInput("brute-force oracle: dimension must be 1 or 2");
  }

  BruteForceCL out;
  std::vector<Vector> opts;
  for (const Vector& e : grid) {
    for (int j = 1; j <= weight_steps; ++j) {
      double w_e = thr * static_cast<double>(j) / (weight_steps + 1);
      auto sol = solve_fw_lp_point(g, D.with_point(e, w_e));
      opts.push_back(sol.first);
      out.contaminants.push_back(e);
      out.weights.push_back(w_e);
    }
  }
  out.optimizers.resize(static_cast<int>(opts.size()), d);
  for (size_t i = 0; i < opts.size(); ++i)
    out.optimizers.row(static_cast<int>(i)) = opts[i].transpose();
  return out;
}

}  // namespace fwg::cl
