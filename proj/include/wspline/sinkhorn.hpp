#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wspline/exact_ot.hpp"
#include "wspline/measure.hpp"

namespace wspline {

enum class MarginalSide { Source, Target };

struct SinkhornParams {
  double eps = 1e-2;       // entropic regularization, squared-length units
  double tol = 1e-7;       // L-infinity marginal violation
  int max_iter = 10000;
  bool debias = true;      // subtract self-transport terms in distances
};

/// Dual state of one entropy-regularized transport problem. Potentials are
/// stored in value units (not scaled by eps). Marginals are the floored,
/// renormalized weights actually used by the solver.
struct SinkhornState {
  double eps = 0.0;
  Eigen::VectorXd f, g;
  Eigen::VectorXd mu, nu;
  std::vector<char> mu_floored, nu_floored;
  int iterations = 0;
  double marginal_violation = 0.0;
  bool converged = false;
};

struct SinkhornResult {
  double cost = 0.0;  // <f,mu> + <g,nu> - eps*(plan mass - 1)
  SinkhornState state;
};

/// Raw (biased) entropic cost between two measures on the same grid, solved
/// with log-domain potential updates and separable per-axis kernel passes.
/// An optional warm state seeds the potentials.
SinkhornResult sinkhorn_grid_raw(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const SinkhornParams& params,
                                 const SinkhornState* warm = nullptr);

/// Raw entropic cost between weighted point sets with a dense cost matrix.
SinkhornResult sinkhorn_points_raw(const WeightedPoints& mu, const WeightedPoints& nu,
                                   const SinkhornParams& params,
                                   const SinkhornState* warm = nullptr);

/// Entropic distance; with params.debias the self-transport terms are
/// subtracted: S(mu,nu) = W(mu,nu) - W(mu,mu)/2 - W(nu,nu)/2.
double sinkhorn_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const SinkhornParams& params);
double sinkhorn_distance(const WeightedPoints& mu, const WeightedPoints& nu,
                         const SinkhornParams& params);

/// Gradient of the entropic cost with respect to one side's weights: the
/// centered dual potential of that side, zeroed on floored cells.
Eigen::VectorXd sinkhorn_grad_weights(const SinkhornState& state, MarginalSide side);

struct EntropicBarycenter {
  DiscreteMeasure result;
  int iterations = 0;
  double residual = 0.0;
};

/// Fixed-support entropic barycenter of (mu1, mu2) with weights (1-t, t),
/// computed by log-domain iterative Bregman projections with a debiasing
/// fixed point that removes most of the entropic blur.
EntropicBarycenter entropic_barycenter(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                                       double t, double eps, double tol = 1e-7,
                                       int max_iter = 10000);

/// Separable application of the Gibbs kernel exp(-d^2/eps) between cell
/// centers, one convolution pass per grid axis.
Eigen::VectorXd apply_gibbs_kernel(const Grid2& grid, const Eigen::VectorXd& values,
                                   double eps);

/// Log-domain kernel application: returns log(K exp(log_values)) computed by
/// per-axis log-sum-exp passes. Exposed for testing against the dense kernel.
Eigen::VectorXd gibbs_kernel_lse(const Grid2& grid, const Eigen::VectorXd& log_values,
                                 double eps);

}  // namespace wspline
