#pragma once

#include <optional>
#include <vector>

#include "fwg/gauge.hpp"
#include "fwg/sample.hpp"

namespace fwg {

enum class Uniqueness { yes, no, unknown };

/// One convex multiplier of an optimality certificate: weight lambda on the
/// dual vertex `dual_index` of the subdifferential at point `point`.
struct CertificateEntry {
  int point;
  int dual_index;
  double lambda;
};

struct Certificate {
  std::vector<CertificateEntry> entries;
  double residual = 0.0;  // l2 norm of sum_a w_a p_a
};

struct FWSolution {
  Vector optimizer;
  double objective = 0.0;
  Certificate certificate;
  Uniqueness unique = Uniqueness::unknown;
};

double fw_objective(const PolyhedralGauge& g, const WeightedSample& s,
                    const Vector& x);
double fw_objective(const BlackBoxGauge& g, const WeightedSample& s,
                    const Vector& x);

/// Global minimizer of sum_a w_a gamma(x - a) by linear programming.
FWSolution solve_fw_lp(const PolyhedralGauge& g, const WeightedSample& s);

/// Optimizer and objective only; skips the certificate and uniqueness work.
std::pair<Vector, double> solve_fw_lp_point(const PolyhedralGauge& g,
                                            const WeightedSample& s);

/// First-order optimality test: finds convex multipliers over active dual
/// vertices with sum_a w_a p_a = 0, or reports none exist.
std::optional<Certificate> is_fw_point(const PolyhedralGauge& g,
                                       const WeightedSample& s,
                                       const Vector& x);

/// Probes the one-sided directional derivative along every primal vertex
/// direction (and its negative); "no" requires a confirmed distinct optimizer.
Uniqueness fw_uniqueness(const PolyhedralGauge& g, const WeightedSample& s,
                         const Vector& x_star);

struct SubgradientOptions {
  int iterations = 10000;
  double step_scale = 0.0;  // 0 = f(x0) / (w_A * sigma)
  bool polish = true;       // cutting-plane refinement after the descent
};

/// First-order solver for black-box gauges. Euclidean gauges use Weiszfeld
/// iteration; generic ones use diminishing-step subgradient descent followed
/// by a cutting-plane polish. `unique` is always `unknown`. The certificate
/// carries per-point subgradients only in the Euclidean case.
FWSolution solve_fw_subgradient(const BlackBoxGauge& g, const WeightedSample& s,
                                const SubgradientOptions& opt = {});

/// For collinear samples base + tau_i * v along a skewness direction v with
/// unit weights, checks optimality of the point with index ceil(n/(1+sigma)).
bool skew_line_fw_check(const PolyhedralGauge& g, const std::vector<double>& taus,
                        const Vector& base);

struct ThreePointWitness {
  Vector c;
  double w_c = 0.0;
  double residual = 0.0;
  bool verified = false;
};

/// Builds the third point c = m - rho*v_ab making m the Euclidean
/// Fermat-Weber point of {(a,w_a),(b,w_b),(c,w_c)} with w_c = |v_ab|.
ThreePointWitness euclid_three_point_witness(const Vector& a, const Vector& b,
                                             const Vector& m, double rho,
                                             double w_a = 1.0, double w_b = 1.0);

}  // namespace fwg
