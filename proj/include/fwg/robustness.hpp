#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fwg/solver.hpp"

namespace fwg::robust {

/// A corruption recipe: which points get replaced and how.
struct CorruptionPlan {
  enum class Mode { shift, replace };
  std::vector<int> indices;
  Mode mode = Mode::shift;
  double magnitude = 0.0;  // shift mode: points move by -magnitude * v
  Vector direction;        // shift mode
  Matrix replacements;     // replace mode, one row per index

  double corrupted_weight(const WeightedSample& s) const;
  WeightedSample apply(const WeightedSample& s) const;
};

/// Replaces the points indexed by C with c - M*v; weights are unchanged.
WeightedSample corrupt_shift(const WeightedSample& s, const std::vector<int>& C,
                             double M, const Vector& v);

/// Replaces the points indexed by C with the given rows; weights unchanged.
WeightedSample corrupt_replace(const WeightedSample& s, const std::vector<int>& C,
                               const Matrix& replacements);

struct EscapeResult {
  std::optional<double> M_found;
  std::vector<std::pair<double, double>> trace;  // (M, gamma(a* - x*_M))
  Vector base_optimizer;
  double radius = 0.0;
};

/// Doubles the shift magnitude M from 1 until the corrupted optimizer leaves
/// {x : gamma(a*-x) <= R}. R <= 0 selects the default 10*(1+sigma)*M_{a*}.
EscapeResult escape_experiment(const PolyhedralGauge& g, const WeightedSample& s,
                               const std::vector<int>& C, const Vector& v,
                               double R = 0.0, int max_doublings = 60);

/// Corruption bound kappa = (w_A-w_C)/(w_A-(1+sigma)w_C) * sigma(1+sigma) * M
/// with M = max_a gamma(a* - a); requires (1+sigma) w_C < w_A strictly.
double kappa_bound(const PolyhedralGauge& g, const WeightedSample& s, double w_C,
                   const Vector& a_star);

struct TrialRecord {
  int trial = 0;
  bool adversarial = false;
  double shift_magnitude = 0.0;  // adversarial trials only
  Vector optimizer;
  double distance = 0.0;  // gamma(a* - x*)
  double ratio = 0.0;     // distance / kappa
};

struct RobustnessReport {
  double threshold_fraction = 0.0;  // 1/(1+sigma)
  double corrupted_weight = 0.0;
  double kappa = 0.0;
  Vector base_optimizer;
  std::vector<TrialRecord> trials;
  double max_ratio = 0.0;
  int violations = 0;
};

/// Under-threshold corruption experiment: random far-field replacements and
/// adversarial skew shifts; every optimizer must stay within kappa.
RobustnessReport verify_lower_bound(const PolyhedralGauge& g,
                                    const WeightedSample& s,
                                    const std::vector<int>& C, int trials,
                                    std::uint64_t seed, int threads = 1);

/// Deterministic corruption order: heaviest first, then farthest from a*.
std::vector<int> greedy_corruption_order(const WeightedSample& s,
                                         const Vector& a_star);

/// Bisection estimate of the breakdown fraction using greedy subsets shifted
/// along the lexicographically smallest skewness direction.
double breakdown_estimate(const PolyhedralGauge& g, const WeightedSample& s,
                          double resolution, int max_doublings = 60);

struct Box {
  Vector lo;
  Vector hi;
};

/// Coordinate-wise sample box; the uniform containment set for separable
/// gauges with parameters bs.
Box separable_box_bound(const std::vector<double>& bs, const WeightedSample& s);

}  // namespace fwg::robust
