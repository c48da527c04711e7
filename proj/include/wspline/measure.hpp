#pragma once

#include <Eigen/Dense>
#include <utility>

#include "wspline/grid.hpp"

namespace wspline {

/// Probability measure on the cells of a Grid2: one nonnegative weight per
/// cell, summing to one. Construction always normalizes; inputs whose mass is
/// off by more than 1e-6 are still accepted but flagged.
class DiscreteMeasure {
public:
  DiscreteMeasure(Grid2 grid, Eigen::VectorXd weights);

  const Grid2& grid() const { return grid_; }
  const Eigen::VectorXd& weights() const { return w_; }
  bool renormalization_flagged() const { return flagged_; }

  double operator()(int ix, int iy) const { return w_[grid_.index(ix, iy)]; }

private:
  Grid2 grid_;
  Eigen::VectorXd w_;
  bool flagged_ = false;
};

/// Uniformly weighted point cloud in R^d, d in {1,2}.
class PointCloud {
public:
  /// points: one row per atom.
  explicit PointCloud(Eigen::MatrixXd points);

  int size() const { return static_cast<int>(pts_.rows()); }
  int dim() const { return static_cast<int>(pts_.cols()); }
  const Eigen::MatrixXd& points() const { return pts_; }

private:
  Eigen::MatrixXd pts_;
};

/// Gaussian N(m, sigma^2) given by mean m and standard-deviation matrix sigma
/// (symmetric positive definite). Full matrices are supported for d in {1,2};
/// diagonal matrices for any d.
class Gaussian {
public:
  Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd std_matrix);

  /// Diagonal shortcut: std_diag holds the diagonal entries of sigma.
  static Gaussian diagonal(Eigen::VectorXd mean, Eigen::VectorXd std_diag);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& std_matrix() const { return std_; }
  bool is_diagonal() const;

  double density(const Eigen::VectorXd& x) const;

private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd std_;
};

/// Normalize a raw nonnegative density sampled on a grid into a measure.
/// raw is indexed like Grid2 storage (iy * width + ix).
DiscreteMeasure measure_from_density_grid(const Grid2& grid, const Eigen::VectorXd& raw);

/// Sample a Gaussian density at the cell centers and normalize.
DiscreteMeasure rasterize_gaussian(const Gaussian& g, const Grid2& grid);

/// First and second moments of a grid measure over cell centers.
std::pair<Eigen::Vector2d, Eigen::Matrix2d> moments(const DiscreteMeasure& mu);

}  // namespace wspline
