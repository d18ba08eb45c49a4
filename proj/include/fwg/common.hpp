#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace fwg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;  // rows are points / ball vertices

/// Global default tolerance for activity and face-membership predicates.
inline constexpr double kTol = 1e-9;

/// Malformed or inconsistent user input (CLI exit code 2).
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A documented precondition does not hold (CLI exit code 3).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal invariant failed; indicates a bug (CLI exit code 4).
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Vector make_vector(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Activity threshold relative to the magnitude of the compared value.
inline double rel_tol(double scale, double tol) {
  return tol * std::max(1.0, std::abs(scale));
}

/// Deterministic per-stream seed derivation (splitmix64 step).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Rounds to the given number of significant decimal digits.
double round_sig(double x, int digits = 12);

/// Formats with the given number of significant digits ("%.*g").
std::string fmt_sig(double x, int digits = 12);

}  // namespace fwg
