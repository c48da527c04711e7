#pragma once

#include <Eigen/Dense>

#include "wspline/errors.hpp"

namespace wspline {

/// Finitely supported measure: one row of `points` per atom, weight per atom.
/// Weights are normalized on construction.
struct WeightedPoints {
  Eigen::MatrixXd points;  // n x d
  Eigen::VectorXd weights;  // n, nonnegative, sums to 1

  WeightedPoints(Eigen::MatrixXd pts, Eigen::VectorXd w);
  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

/// Transport plan between two finitely supported measures. Row sums equal the
/// source weights and column sums the target weights.
struct Coupling {
  Eigen::MatrixXd plan;  // n x m
};

struct ExactOtResult {
  double cost = 0.0;
  Coupling coupling;
};

/// Exact squared-W2 between small discrete measures (combined support <= 64),
/// solved by successive shortest paths. The returned plan is certified
/// optimal through its dual variables before returning.
ExactOtResult wasserstein2_exact_small(const WeightedPoints& mu, const WeightedPoints& nu);

/// Exact squared-W2 between 1D discrete measures via quantile matching.
double wasserstein2_1d(const WeightedPoints& mu, const WeightedPoints& nu);

/// Monotone quantile map sampled on mu's atoms (midpoint-quantile convention).
/// Atoms of mu must be distinct.
Eigen::VectorXd monge_map_1d(const WeightedPoints& mu, const WeightedPoints& nu);

}  // namespace wspline
