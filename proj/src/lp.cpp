#include "fwg/lp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace fwg {

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::string fmt_sig(double x, int digits) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

}  // namespace fwg

namespace fwg::lp {
namespace {

constexpr double kPivotEps = 1e-10;
constexpr double kCostEps = 1e-9;

// Tableau simplex on min c'x, Ax = b (b >= 0 assumed), x >= 0, starting from
// the given basis. `basis` holds the column index of each basic variable.
// Returns false when unbounded.
bool simplex_iterate(Matrix& T, std::vector<int>& basis, const Vector& cost) {
  const int m = static_cast<int>(T.rows());
  const int n = static_cast<int>(T.cols()) - 1;
  const long max_iters = 200L * (m + n) * (m + n) + 10000;
  for (long iter = 0; iter < max_iters; ++iter) {
    // Reduced costs from the current basis; Bland: smallest improving index.
    Vector y(m);
    for (int i = 0; i < m; ++i) y[i] = cost[basis[i]];
    int entering = -1;
    for (int j = 0; j < n; ++j) {
      double rc = cost[j] - y.dot(T.col(j));
      if (rc < -kCostEps) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return true;  // optimal

    int leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      double a = T(i, entering);
      if (a > kPivotEps) {
        double ratio = T(i, n) / a;
        if (ratio < best_ratio - kPivotEps ||
            (ratio < best_ratio + kPivotEps &&
             (leaving < 0 || basis[i] < basis[leaving]))) {
          best_ratio = ratio;
          leaving = i;
        }
      }
    }
    if (leaving < 0) return false;  // unbounded

    double piv = T(leaving, entering);
    T.row(leaving) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leaving) continue;
      double f = T(i, entering);
      if (f != 0.0) T.row(i) -= f * T.row(leaving);
    }
    basis[leaving] = entering;
  }
  throw InternalError("lp: simplex iteration limit exceeded");
}

}  // namespace

Result solve_standard(const Matrix& A_in, const Vector& b_in, const Vector& c) {
  const int m = static_cast<int>(A_in.rows());
  const int n = static_cast<int>(A_in.cols());
  Matrix A = A_in;
  Vector b = b_in;
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      A.row(i) = -A.row(i);
      b[i] = -b[i];
    }
  }

  // Phase 1: artificial basis.
  Matrix T(m, n + m + 1);
  T.leftCols(n) = A;
  T.block(0, n, m, m) = Matrix::Identity(m, m);
  T.col(n + m) = b;
  std::vector<int> basis(m);
  Vector cost1 = Vector::Zero(n + m);
  for (int i = 0; i < m; ++i) {
    basis[i] = n + i;
    cost1[n + i] = 1.0;
  }
  if (!simplex_iterate(T, basis, cost1))
    throw InternalError("lp: phase-1 unbounded");

  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  double phase1 = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) phase1 += T(i, n + m);
  if (phase1 > 1e-7 * scale) {
    Result r;
    r.status = Status::infeasible;
    return r;
  }

  // Pivot remaining artificials out; a zero row is redundant and harmless.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(T(i, j)) > 1e-8) {
        col = j;
        break;
      }
    }
    if (col < 0) continue;
    double piv = T(i, col);
    T.row(i) /= piv;
    for (int k = 0; k < m; ++k) {
      if (k == i) continue;
      double f = T(k, col);
      if (f != 0.0) T.row(k) -= f * T.row(i);
    }
    basis[i] = col;
  }

  // Rows still carrying an artificial basic variable are redundant (their
  // original-column entries vanished); drop them before phase 2.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) keep.push_back(i);
  const int m2 = static_cast<int>(keep.size());
  Matrix T2(m2, n + 1);
  std::vector<int> basis2(m2);
  for (int i = 0; i < m2; ++i) {
    T2.row(i).head(n) = T.row(keep[i]).head(n);
    T2(i, n) = T(keep[i], n + m);
    basis2[i] = basis[keep[i]];
  }

  if (!simplex_iterate(T2, basis2, c)) {
    Result r;
    r.status = Status::unbounded;
    return r;
  }
  Result r;
  r.status = Status::optimal;
  r.x = Vector::Zero(n);
  for (int i = 0; i < m2; ++i) r.x[basis2[i]] = T2(i, n);
  r.objective = c.dot(r.x);
  return r;
}

int Model::add_var(double objective_coeff, bool free_var) {
  obj_.push_back(objective_coeff);
  free_.push_back(free_var);
  return static_cast<int>(obj_.size()) - 1;
}

void Model::add_eq(const std::vector<Term>& terms, double rhs) {
  rows_.push_back({terms, rhs, 0});
}
void Model::add_le(const std::vector<Term>& terms, double rhs) {
  rows_.push_back({terms, rhs, -1});
}
void Model::add_ge(const std::vector<Term>& terms, double rhs) {
  rows_.push_back({terms, rhs, +1});
}

Result Model::run(double sense) const {
  const int nv = num_vars();
  // Standard-form columns: one per variable, plus one negative part per free
  // variable, plus one slack per inequality row.
  std::vector<int> neg_col(nv, -1);
  int cols = nv;
  for (int j = 0; j < nv; ++j)
    if (free_[j]) neg_col[j] = cols++;
  int slack0 = cols;
  for (const Row& r : rows_)
    if (r.kind != 0) ++cols;

  const int m = static_cast<int>(rows_.size());
  Matrix A = Matrix::Zero(m, cols);
  Vector b(m);
  int slack = slack0;
  for (int i = 0; i < m; ++i) {
    const Row& r = rows_[i];
    for (const Term& t : r.terms) {
      A(i, t.first) += t.second;
      if (neg_col[t.first] >= 0) A(i, neg_col[t.first]) -= t.second;
    }
    b[i] = r.rhs;
    if (r.kind == -1) A(i, slack++) = 1.0;
    if (r.kind == +1) A(i, slack++) = -1.0;
  }
  Vector c = Vector::Zero(cols);
  for (int j = 0; j < nv; ++j) {
    c[j] = sense * obj_[j];
    if (neg_col[j] >= 0) c[neg_col[j]] = -sense * obj_[j];
  }

  Result raw = solve_standard(A, b, c);
  Result out;
  out.status = raw.status;
  if (raw.status == Status::optimal) {
    out.x = Vector::Zero(nv);
    for (int j = 0; j < nv; ++j) {
      out.x[j] = raw.x[j];
      if (neg_col[j] >= 0) out.x[j] -= raw.x[neg_col[j]];
    }
    out.objective = sense * raw.objective;
  }
  return out;
}

Result Model::minimize() const { return run(+1.0); }
Result Model::maximize() const { return run(-1.0); }

}  // namespace fwg::lp
