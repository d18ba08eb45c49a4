#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fwg/common.hpp"

namespace fwg {

/// A finite polyhedral gauge given by the vertices of its unit ball and/or
/// the vertices of the dual unit ball. Construction validates that the
/// origin lies in the strict interior of both balls and that the two vertex
/// lists are polar-consistent; skewness and skewness directions are cached.
/// Values are immutable after construction and freely shareable.
class PolyhedralGauge {
 public:
  /// Builds from primal ball vertices; the dual ball is the exact polar
  /// (supported for dim <= 3).
  static PolyhedralGauge from_primal(const Matrix& vertices, double tol = kTol);

  /// Builds from dual ball vertices; the primal ball is the exact polar
  /// (supported for dim <= 3).
  static PolyhedralGauge from_dual(const Matrix& vertices, double tol = kTol);

  /// Builds from both vertex lists (required for dim > 3).
  static PolyhedralGauge from_vertices(const Matrix& primal, const Matrix& dual,
                                       double tol = kTol);

  int dim() const { return dim_; }
  double tol() const { return tol_; }
  const Matrix& primal_vertices() const { return primal_; }
  const Matrix& dual_vertices() const { return dual_; }

  /// gamma(x) = max over dual vertices p of <p,x>.
  double eval(const Vector& x) const;
  double operator()(const Vector& x) const { return eval(x); }

  /// Dual gauge value: max over primal vertices u of <q,u>.
  double dual_eval(const Vector& q) const;

  /// Indices of dual vertices active at x (all of them when x = 0).
  std::vector<int> active_dual(const Vector& x) const;

  /// Indices of primal vertices spanning the exposed face in direction q.
  std::vector<int> active_primal(const Vector& q) const;

  double skewness() const { return skewness_; }
  /// Vertex-derived skewness directions (rows), lexicographically sorted.
  const Matrix& skew_dirs() const { return skew_dirs_; }
  /// Lexicographically smallest skewness direction.
  Vector skew_dir() const { return skew_dirs_.row(0); }
  bool is_norm() const { return is_norm_; }

 private:
  PolyhedralGauge() = default;
  void finalize();

  int dim_ = 0;
  double tol_ = kTol;
  Matrix primal_;  // rows
  Matrix dual_;    // rows
  double skewness_ = 1.0;
  Matrix skew_dirs_;
  bool is_norm_ = false;
};

/// A face of the dual ball: the subdifferential of the gauge at a point.
struct SubgradientFace {
  std::vector<int> indices;  // into dual_vertices
  Matrix generators;         // the corresponding rows
  Vector at;                 // the point the face was taken at
};

/// The subdifferential of gamma at x: all dual vertices p with
/// <p,x> = gamma(x) (the whole dual vertex list at x = 0).
SubgradientFace subdifferential(const PolyhedralGauge& g, const Vector& x);

/// Swaps the roles of the two balls; involution up to vertex order.
PolyhedralGauge dual_gauge(const PolyhedralGauge& g);

/// Tests v in SD_gamma via the subdifferential inclusion
/// -(1/sigma) dgamma(v) subset dgamma(-v); memberships decided by LP.
bool check_skew_subdiff(const PolyhedralGauge& g, const Vector& v);

/// Simplicial gauge on the quotient chart obtained by pinning coordinate 0.
/// Unit ball vertices: e_1..e_d and (-1,...,-1); skewness d.
PolyhedralGauge tropical_gauge(int d, double tol = kTol);

/// One-dimensional gauge gamma_b(x) = max((1-b)x, -bx), 0 < b < 1.
PolyhedralGauge quantile_gauge(double b, double tol = kTol);

/// Coordinate-separable gauge: gamma(x) = sum_i gamma_{b_i}(x_i).
PolyhedralGauge separable_gauge(const std::vector<double>& bs, double tol = kTol);

/// Exact polar of a vertex-described ball with 0 interior (dim <= 3).
Matrix polar_vertices(const Matrix& vertices, double tol = kTol);

/// Largest r such that the l-inf ball of radius r fits in conv(vertices);
/// computed by LP, nonpositive when the origin is not strictly interior.
double origin_interior_margin(const Matrix& vertices);

/// A gauge available only through evaluation and one subgradient per point;
/// skewness is supplied by the constructor.
class BlackBoxGauge {
 public:
  enum class Kind { generic, euclidean };

  BlackBoxGauge(int dim, std::function<double(const Vector&)> eval,
                std::function<Vector(const Vector&)> subgradient,
                double skewness, Kind kind = Kind::generic);

  static BlackBoxGauge euclidean(int dim);
  /// Wraps a polyhedral gauge (subgradient = first active dual vertex).
  static BlackBoxGauge wrap(const PolyhedralGauge& g);

  int dim() const { return dim_; }
  double eval(const Vector& x) const { return eval_(x); }
  double operator()(const Vector& x) const { return eval_(x); }
  Vector subgradient(const Vector& x) const { return subgrad_(x); }
  double skewness() const { return skewness_; }
  Kind kind() const { return kind_; }

 private:
  int dim_;
  std::function<double(const Vector&)> eval_;
  std::function<Vector(const Vector&)> subgrad_;
  double skewness_;
  Kind kind_;
};

}  // namespace fwg
