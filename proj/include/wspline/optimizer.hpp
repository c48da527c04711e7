#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wspline/measure.hpp"
#include "wspline/spline.hpp"

namespace wspline {

struct OptimizerConfig {
  int max_outer = 200;            // outer iterations per ladder stage
  double eps = 1e-2;              // final entropic regularization
  std::vector<double> eps_ladder; // full ladder; defaults to {eps}
  double sinkhorn_tol = 1e-7;
  int sinkhorn_max_iter = 10000;
  bool debias = true;
  double beta = 0.8;              // inertia, restart on objective increase
  int refresh_every = 5;          // barycenter refresh cadence R
  std::string step_rule = "backtracking";  // or "fixed"
  double fixed_step = 0.0;        // used by step_rule == "fixed"
  double stop_tol = 1e-7;         // relative surrogate decrease
  unsigned seed = 0;
  int threads = 0;                // 0: WSPLINE_THREADS or hardware
};

struct OptimizerTrace {
  std::vector<double> objective;   // surrogate value per accepted outer iteration
  std::vector<double> step_sizes;
  std::vector<char> refreshed;     // barycenter refresh marker per iteration
  double wall_time_sec = 0.0;

  std::string to_csv() const;
};

/// Spline interpolation problem over rasterized grid measures. Keyframe
/// times must land on multiples of 1/K; Hermite pins frames 0, 1, K-1, K.
struct GridSplineProblem {
  std::vector<DiscreteMeasure> keyframes;
  std::vector<double> times;
  int K = 8;
  double delta = 0.0;
  BoundaryCondition bc = BoundaryCondition::Natural;
};

struct GridSplineSolution {
  std::vector<DiscreteMeasure> frames;
  EnergyBreakdown energies;  // true objective from a fresh barycenter pass
  OptimizerTrace trace;
};

/// Minimize the entropic spline objective over free frame weights by
/// inertial projected gradient steps against barycenters that are frozen
/// between refreshes; all per-term transport solves within an iteration run
/// independently and the weight update is a barrier.
GridSplineSolution solve_grid_spline(const GridSplineProblem& problem,
                                     const OptimizerConfig& config);

struct PointCloudSplineProblem {
  std::vector<PointCloud> keyframes;
  std::vector<double> times;
  int K = 8;
  double delta = 0.0;
  BoundaryCondition bc = BoundaryCondition::Natural;
};

struct PointCloudSplineSolution {
  std::vector<PointCloud> frames;
  EnergyBreakdown energies;
  OptimizerTrace trace;
};

/// Minimize the discrete spline objective over free atom locations with
/// atom correspondences fixed between refreshes (exact assignment when the
/// clouds are small). Block steps are exact for the quadratic surrogate.
PointCloudSplineSolution solve_pointcloud_spline(const PointCloudSplineProblem& problem,
                                                 const OptimizerConfig& config);

/// Euclidean projection onto the probability simplex, sort-based.
Eigen::VectorXd simplex_project(const Eigen::VectorXd& v);

/// Thread budget: `requested` if positive, else WSPLINE_THREADS, else the
/// hardware concurrency.
int resolve_thread_count(int requested);

}  // namespace wspline
