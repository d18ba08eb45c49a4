#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "fwg/cells.hpp"
#include "fwg/solver.hpp"

namespace fwg::cl {

enum class Verdict { in, out, indeterminate };

struct Witness {
  Vector e;
  double w_e;
};

struct MembershipResult {
  Verdict verdict = Verdict::out;
  /// min over p in Q_a of the dual gauge of -p (the LP optimum).
  double min_dual = 0.0;
  double threshold = 0.0;  // w_D / sigma
  std::optional<Witness> witness;
};

/// Decides a in CL(D,w) through min_{p in Q_a} dual(-p) < w_D/sigma, where
/// Q_a is the weighted Minkowski sum of the subdifferential faces at a.
/// Accepted points come with a verified one-point contamination witness.
MembershipResult cl_membership(const PolyhedralGauge& g, const WeightedSample& Dw,
                               const Vector& a);

struct SelfContamination {
  bool median = false;  // a is optimal for (D,w)+(a,weight)
  Uniqueness uniqueness = Uniqueness::unknown;
};

/// Optimality/uniqueness of a for (D,w)+(a, weight); weight defaults to the
/// contamination threshold w_D/sigma.
SelfContamination self_contamination_check(const PolyhedralGauge& g,
                                           const WeightedSample& Dw,
                                           const Vector& a,
                                           std::optional<double> weight = {});

struct CLRegion {
  cells::CellComplex complex;  // cell complex of D
  std::vector<int> accepted;   // indices into complex.cells
  std::vector<int> rejected;
  std::vector<int> indeterminate;
  std::vector<double> min_dual;             // per cell
  std::vector<std::optional<Witness>> witness;  // per cell, accepted only
  bool connected = false;
  bool sandwich_ok = false;  // FW point's cell accepted, accepted => bounded
};

/// Cell-by-cell contamination locus over the complex of D (dim <= 2).
CLRegion contamination_locus(const PolyhedralGauge& g, const WeightedSample& Dw);

/// Closed-form contamination interval [d_1, d_k] of the b-quantile.
std::pair<double, double> quantile_cl(const std::vector<double>& d_sorted,
                                      const std::vector<double>& w, double b);

struct TropicalBalance {
  bool balanced = false;
  double total_weight = 0.0;
  /// Region order: lower-left, lower-right, upper (in chart coordinates).
  std::array<double, 3> interior{};   // strict interiors
  std::array<double, 3> inclusive{};  // boundaries included
  std::array<double, 3> boundary{};   // on a boundary ray, m excluded
  double m_weight = 0.0;              // sample weight sitting exactly at m
};

/// Region-weight balancing test for a tropical median in the plane; agrees
/// with the first-order optimality test by construction.
TropicalBalance tropical_median_check(const WeightedSample& s, const Vector& m);

struct BruteForceCL {
  Matrix optimizers;                  // one row per solved contamination
  std::vector<Vector> contaminants;   // e per row
  std::vector<double> weights;        // w_e per row
};

/// Grid-search validation oracle: solves (D,w)+(e,w_e) over a point grid and
/// a weight grid strictly inside (0, w_D/sigma) and collects the optimizers.
BruteForceCL cl_bruteforce_oracle(const PolyhedralGauge& g,
                                  const WeightedSample& Dw, const Vector& lo,
                                  const Vector& hi, int steps, int weight_steps);

}  // namespace fwg::cl
