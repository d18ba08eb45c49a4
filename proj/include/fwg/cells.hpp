#pragma once

#include <optional>
#include <vector>

#include "fwg/gauge.hpp"
#include "fwg/sample.hpp"

namespace fwg::cells {

/// Generators of the cone N(p) spanned by the primal face exposed by a dual
/// face; an empty generator list encodes the trivial cone {0}.
struct ConeDesc {
  std::vector<int> primal_indices;
  Matrix generators;
};

ConeDesc cone_of_face(const PolyhedralGauge& g, const SubgradientFace& face);

/// One elementary convex set: the intersection of translated normal cones
/// chosen by the per-point face family.
struct ElementaryCell {
  std::vector<std::vector<int>> family;  // per distinct sample point, sorted
  int dim = 0;                           // affine dimension (0, 1 or 2)
  bool bounded = true;
  std::vector<Vector> vertices;          // polygon ccw / endpoints / point
  std::vector<Vector> rays;              // recession directions if unbounded
  bool clipped = false;                  // some stored vertex is artificial
  Vector rep;                            // relative-interior representative
};

struct Region {
  std::vector<ElementaryCell> cells;
};

struct CellComplex {
  Matrix points;  // distinct sample points, first-occurrence order
  std::vector<ElementaryCell> cells;
};

/// Distinct rows of `pts` (within eps), first-occurrence order.
Matrix distinct_points(const Matrix& pts, double eps = 1e-9);

/// The face family of the minimal cell containing x (cheap, no geometry).
std::vector<std::vector<int>> family_at(const PolyhedralGauge& g,
                                        const Matrix& A, const Vector& x);

/// The unique cell whose relative interior contains x, with geometry and the
/// boundedness flag (dim <= 2).
ElementaryCell elementary_cell_at(const PolyhedralGauge& g, const Matrix& A,
                                  const Vector& x);

/// The full complex of elementary convex sets (dim <= 2): overlay of the
/// translated normal fans, enumerated through an exact probe set.
CellComplex enumerate_cells(const PolyhedralGauge& g, const Matrix& A);

/// Union of all bounded elementary convex sets.
Region elementary_hull(const PolyhedralGauge& g, const Matrix& A);

/// Membership in the elementary hull without full enumeration.
bool ehull_contains(const PolyhedralGauge& g, const Matrix& A, const Vector& x);

/// Checks EH(D) subset EH(A) by probing D's bounded cells.
bool ehull_monotone_check(const PolyhedralGauge& g, const Matrix& D,
                          const Matrix& A);

struct LinearityResult {
  bool additive;            // gamma(sum w_d d) == sum w_d gamma(d)
  bool common_subgradient;  // intersection of the faces is nonempty (LP)
  bool agree() const { return additive == common_subgradient; }
};

LinearityResult linearity_check(const PolyhedralGauge& g, const Matrix& D,
                                const Vector& w);

/// For a polyhedral norm: every probe inside EH(D) is made optimal by one
/// added contaminant of weight below w_D (constructive check).
bool norm_eh_in_cl_check(const PolyhedralGauge& g, const WeightedSample& Dw,
                         const std::vector<Vector>& probes);

/// Minimum distance between the bounded features of two cells.
double cell_distance(const ElementaryCell& a, const ElementaryCell& b);

}  // namespace fwg::cells
