#include "fwg/robustness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace fwg::robust {
namespace {

void check_indices(const WeightedSample& s, const std::vector<int>& C) {
  for (int i : C)
    if (i < 0 || i >= s.size())
      throw InvalidInput("corruption: index out of range");
}

double subset_weight(const WeightedSample& s, const std::vector<int>& C) {
  double w = 0.0;
  for (int i : C) w += s.weights[i];
  return w;
}

}  // namespace

double CorruptionPlan::corrupted_weight(const WeightedSample& s) const {
  check_indices(s, indices);
  return subset_weight(s, indices);
}

WeightedSample CorruptionPlan::apply(const WeightedSample& s) const {
  if (indices.empty()) throw InvalidInput("corruption: empty subset");
  return mode == Mode::shift
             ? corrupt_shift(s, indices, magnitude, direction)
             : corrupt_replace(s, indices, replacements);
}

WeightedSample corrupt_shift(const WeightedSample& s, const std::vector<int>& C,
                             double M, const Vector& v) {
  check_indices(s, C);
  if (M < 0) throw InvalidInput("corruption: shift magnitude must be >= 0");
  if (v.size() != s.dim()) throw InvalidInput("corruption: dimension mismatch");
  WeightedSample out = s;
  for (int i : C) out.points.row(i) -= M * v.transpose();
  return out;
}

WeightedSample corrupt_replace(const WeightedSample& s, const std::vector<int>& C,
                               const Matrix& replacements) {
  check_indices(s, C);
  if (replacements.rows() != static_cast<int>(C.size()) ||
      replacements.cols() != s.dim())
    throw InvalidInput("corruption: replacement shape mismatch");
  WeightedSample out = s;
  for (size_t k = 0; k < C.size(); ++k)
    out.points.row(C[k]) = replacements.row(static_cast<int>(k));
  return out;
}

EscapeResult escape_experiment(const PolyhedralGauge& g, const WeightedSample& s,
                               const std::vector<int>& C, const Vector& v,
                               double R, int max_doublings) {
  check_indices(s, C);
  EscapeResult out;
  auto base = solve_fw_lp_point(g, s);
  out.base_optimizer = base.first;

  double M_a = 0.0;
  for (int i = 0; i < s.size(); ++i)
    M_a = std::max(M_a, g.eval(out.base_optimizer - s.point(i)));
  out.radius = R > 0 ? R : 10.0 * (1.0 + g.skewness()) * std::max(M_a, 1.0);

  double M = 1.0;
  for (int k = 0; k < max_doublings; ++k, M *= 2.0) {
    auto sol = solve_fw_lp_point(g, corrupt_shift(s, C, M, v));
    double dist = g.eval(out.base_optimizer - sol.first);
    out.trace.push_back({M, dist});
    if (dist > out.radius) {
      out.M_found = M;
      return out;
    }
  }
  return out;
}

double kappa_bound(const PolyhedralGauge& g, const WeightedSample& s, double w_C,
                   const Vector& a_star) {
  const double wA = s.total_weight();
  const double sigma = g.skewness();
  if (!((1.0 + sigma) * w_C < wA))
    throw PreconditionError(
        "kappa: corrupted weight reaches the breakdown threshold");
  double M = 0.0;
  for (int i = 0; i < s.size(); ++i)
    M = std::max(M, g.eval(a_star - s.point(i)));
  return (wA - w_C) / (wA - (1.0 + sigma) * w_C) * sigma * (1.0 + sigma) * M;
}

std::vector<int> greedy_corruption_order(const WeightedSample& s,
                                         const Vector& a_star) {
  std::vector<int> idx(s.size());
  for (int i = 0; i < s.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (s.weights[a] != s.weights[b]) return s.weights[a] > s.weights[b];
    double da = (s.point(a) - a_star).norm();
    double db = (s.point(b) - a_star).norm();
    if (da != db) return da > db;
    return a < b;
  });
  return idx;
}

RobustnessReport verify_lower_bound(const PolyhedralGauge& g,
                                    const WeightedSample& s,
                                    const std::vector<int>& C, int trials,
                                    std::uint64_t seed, int threads) {
  check_indices(s, C);
  RobustnessReport rep;
  const double sigma = g.skewness();
  rep.threshold_fraction = 1.0 / (1.0 + sigma);
  rep.corrupted_weight = subset_weight(s, C);

  auto base = solve_fw_lp_point(g, s);
  rep.base_optimizer = base.first;
  rep.kappa = kappa_bound(g, s, rep.corrupted_weight, rep.base_optimizer);

  const double diam = std::max(s.diameter(), 1.0);
  const Vector v = g.skew_dir();
  rep.trials.resize(trials);

  auto run_trial = [&](int t) {
    TrialRecord rec;
    rec.trial = t;
    WeightedSample corrupted = s;
    if (t % 2 == 0) {
      std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(t)));
      std::uniform_real_distribution<double> U(-0.5, 0.5);
      Matrix repl(static_cast<int>(C.size()), s.dim());
      for (int r = 0; r < repl.rows(); ++r)
        for (int c = 0; c < repl.cols(); ++c)
          repl(r, c) = rep.base_optimizer[c] + U(rng) * 1e6 * diam;
      corrupted = corrupt_replace(s, C, repl);
      rec.adversarial = false;
    } else {
      rec.adversarial = true;
      rec.shift_magnitude = std::pow(10.0, 1 + (t / 2) % 9);
      corrupted = corrupt_shift(s, C, rec.shift_magnitude, v);
    }
    auto sol = solve_fw_lp_point(g, corrupted);
    rec.optimizer = sol.first;
    rec.distance = g.eval(rep.base_optimizer - rec.optimizer);
    rec.ratio = rep.kappa > 0
                    ? rec.distance / rep.kappa
                    : (rec.distance <= 1e-9 ? 0.0
                                            : std::numeric_limits<double>::infinity());
    rep.trials[t] = rec;
  };

  if (C.empty()) {
    // Nothing corrupted: a single deterministic record.
    for (int t = 0; t < trials; ++t) {
      TrialRecord rec;
      rec.trial = t;
      rec.optimizer = rep.base_optimizer;
      rec.distance = 0.0;
      rec.ratio = 0.0;
      rep.trials[t] = rec;
    }
  } else if (threads > 1) {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1))
          run_trial(t);
      });
    for (auto& th : pool) th.join();
  } else {
    for (int t = 0; t < trials; ++t) run_trial(t);
  }

  rep.max_ratio = 0.0;
  rep.violations = 0;
  for (const auto& rec : rep.trials) {
    rep.max_ratio = std::max(rep.max_ratio, rec.ratio);
    if (rec.ratio > 1.0 + 1e-9) ++rep.violations;
  }
  return rep;
}

double breakdown_estimate(const PolyhedralGauge& g, const WeightedSample& s,
                          double resolution, int max_doublings) {
  if (resolution <= 0) throw InvalidInput("breakdown: resolution must be > 0");
  auto base = solve_fw_lp_point(g, s);
  const Vector v = g.skew_dir();
  const double wA = s.total_weight();
  std::vector<int> order = greedy_corruption_order(s, base.first);

  auto breaks = [&](double tau) {
    std::vector<int> C;
    double w = 0.0;
    for (int i : order) {
      if (w + s.weights[i] <= tau * wA + 1e-12 * wA) {
        C.push_back(i);
        w += s.weights[i];
      }
    }
    if (C.empty()) return false;
    return escape_experiment(g, s, C, v, 0.0, max_doublings).M_found.has_value();
  };

  double lo = 0.0, hi = 1.0;
  while (hi - lo > resolution) {
    double mid = 0.5 * (lo + hi);
    if (breaks(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

Box separable_box_bound(const std::vector<double>& bs, const WeightedSample& s) {
  if (static_cast<int>(bs.size()) != s.dim())
    throw InvalidInput("separable box: parameter count must match dimension");
  for (double b : bs)
    if (!(b > 0.0 && b <= 0.5))
      throw InvalidInput("separable box: each b must lie in (0, 0.5]");
  Box box;
  box.lo = s.points.colwise().minCoeff().transpose();
  box.hi = s.points.colwise().maxCoeff().transpose();
  return box;
}

}  // namespace fwg::robust
