#pragma once

#include <string>
#include <vector>

#include "fwg/common.hpp"

namespace fwg {

/// A finite weighted point set; rows of `points` are the sample points.
struct WeightedSample {
  Matrix points;   // n x d
  Vector weights;  // n, strictly positive

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  double total_weight() const { return weights.sum(); }
  Vector point(int i) const { return points.row(i); }

  void validate() const;

  WeightedSample with_point(const Vector& e, double w) const;
  WeightedSample translated(const Vector& t) const;
  WeightedSample scaled_weights(double lambda) const;

  /// Euclidean diameter of the point set.
  double diameter() const;

  static WeightedSample from_rows(std::initializer_list<std::initializer_list<double>> pts,
                                  std::initializer_list<double> ws);
};

/// Merges coincident points (within eps), summing their weights; keeps the
/// first-occurrence order.
WeightedSample merge_coincident(const WeightedSample& s, double eps = 1e-9);

/// CSV with header "x1,...,xd,weight".
WeightedSample sample_from_csv(const std::string& path);
WeightedSample sample_from_csv_text(const std::string& text);
std::string sample_to_csv_text(const WeightedSample& s);

}  // namespace fwg
