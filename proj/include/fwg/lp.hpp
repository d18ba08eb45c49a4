#pragma once

#include <utility>
#include <vector>

#include "fwg/common.hpp"

namespace fwg::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  Vector x;           // values of the model variables
  double objective = 0.0;
};

/// Two-phase dense primal simplex with Bland's rule for
///   min c'x  s.t.  A x = b,  x >= 0.
Result solve_standard(const Matrix& A, const Vector& b, const Vector& c);

/// Small modeling layer over the standard form: free variables are split,
/// inequality rows get slacks. Row/column order is deterministic.
class Model {
 public:
  /// Returns the index of a new variable. Free variables may take any sign.
  int add_var(double objective_coeff = 0.0, bool free_var = false);

  using Term = std::pair<int, double>;
  void add_eq(const std::vector<Term>& terms, double rhs);
  void add_le(const std::vector<Term>& terms, double rhs);
  void add_ge(const std::vector<Term>& terms, double rhs);

  int num_vars() const { return static_cast<int>(obj_.size()); }

  Result minimize() const;
  Result maximize() const;

 private:
  struct Row {
    std::vector<Term> terms;
    double rhs;
    int kind;  // 0 eq, -1 le, +1 ge
  };
  std::vector<double> obj_;
  std::vector<bool> free_;
  std::vector<Row> rows_;

  Result run(double sense) const;
};

}  // namespace fwg::lp
