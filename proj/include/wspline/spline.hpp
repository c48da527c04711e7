#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wspline/exact_ot.hpp"
#include "wspline/gaussian.hpp"
#include "wspline/measure.hpp"
#include "wspline/sinkhorn.hpp"

namespace wspline {

enum class BoundaryCondition { Natural, Hermite, Periodic };

BoundaryCondition bc_from_string(const std::string& s);
std::string bc_to_string(BoundaryCondition bc);

/// Energy value with its per-step decomposition:
/// total = 4K^3 * sum(spline_terms) + delta * K * sum(path_terms).
struct EnergyBreakdown {
  double total = 0.0;
  std::vector<double> spline_terms;  // per interior (or cyclic) index
  std::vector<double> path_terms;    // per step k -> k+1
  std::string backend;
  int K = 0;
  double delta = 0.0;
  double eps = 0.0;

  std::string to_json() const;
};

// ---- discrete energies over Gaussian tuples (closed-form backend) ----

/// K * sum of squared Gaussian Wasserstein distances between neighbors.
double discrete_path_energy(const std::vector<Gaussian>& tuple);

/// 4K^3 * sum over interior k of W^2(mu_k, Bar^{1/2}(mu_{k-1}, mu_{k+1})).
/// Periodic tuples must close (mu_0 = mu_K) and wrap with mu_{K+1} = mu_1.
double discrete_spline_energy(const std::vector<Gaussian>& tuple,
                              BoundaryCondition bc = BoundaryCondition::Natural);

/// Same with the generalized barycenter based at mu_k.
double discrete_gen_spline_energy(const std::vector<Gaussian>& tuple,
                                  BoundaryCondition bc = BoundaryCondition::Natural);

EnergyBreakdown full_objective(const std::vector<Gaussian>& tuple, double delta,
                               BoundaryCondition bc = BoundaryCondition::Natural,
                               bool generalized = false);

// ---- discrete energies over weighted point sets (exact / 1D backends) ----

/// Midpoint displacement interpolation read off an optimal plan.
WeightedPoints exact_barycenter(const WeightedPoints& mu, const WeightedPoints& nu, double t);

/// 1D quantile displacement interpolation (monotone coupling).
WeightedPoints quantile_barycenter(const WeightedPoints& mu, const WeightedPoints& nu, double t);

double discrete_path_energy(const std::vector<WeightedPoints>& tuple);
double discrete_spline_energy(const std::vector<WeightedPoints>& tuple,
                              BoundaryCondition bc = BoundaryCondition::Natural);
EnergyBreakdown full_objective(const std::vector<WeightedPoints>& tuple, double delta,
                               BoundaryCondition bc = BoundaryCondition::Natural);

// ---- discrete energies over grid measures (entropic backend) ----

double discrete_path_energy(const std::vector<DiscreteMeasure>& tuple,
                            const SinkhornParams& params);
double discrete_spline_energy(const std::vector<DiscreteMeasure>& tuple,
                              const SinkhornParams& params,
                              BoundaryCondition bc = BoundaryCondition::Natural);
EnergyBreakdown full_objective(const std::vector<DiscreteMeasure>& tuple, double delta,
                               const SinkhornParams& params,
                               BoundaryCondition bc = BoundaryCondition::Natural);

/// Throws ConstraintViolated(index) when a pinned frame differs from its
/// keyframe. Grid frames must match bit for bit.
void check_constraints(const std::vector<DiscreteMeasure>& tuple,
                       const std::vector<int>& pinned,
                       const std::vector<DiscreteMeasure>& keyframes);
void check_constraints(const std::vector<WeightedPoints>& tuple,
                       const std::vector<int>& pinned,
                       const std::vector<WeightedPoints>& keyframes);

// ---- temporal extension ----

/// Piecewise cubic Hermite extension of a knot tuple to [0,1], quadratic on
/// the interior midpoint intervals and linear on the two end half-intervals.
/// Knots are vectors (diagonal entries of standard-deviation matrices, or
/// any coefficient tuple).
class TemporalExtension {
public:
  explicit TemporalExtension(std::vector<Eigen::VectorXd> knots);

  int K() const { return static_cast<int>(knots_.size()) - 1; }
  Eigen::VectorXd operator()(double t) const;
  Eigen::VectorXd deriv(double t) const;
  Eigen::VectorXd deriv2(double t) const;

  /// Exact integral of |eta'|^2 over [0,1].
  double path_energy() const;
  /// Exact integral of |eta''|^2 over [0,1].
  double spline_energy() const;

  /// Discrete counterparts on the knots:
  /// K * sum_{k=1}^{K} |s_k - s_{k-1}|^2 and
  /// 4K^3 * sum_{k=1}^{K-1} |s_k - (s_{k-1}+s_{k+1})/2|^2.
  double discrete_path_energy() const;
  double discrete_spline_energy() const;

private:
  std::vector<Eigen::VectorXd> knots_;
};

}  // namespace wspline
