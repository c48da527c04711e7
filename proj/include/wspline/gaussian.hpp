#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wspline/cubic_spline.hpp"
#include "wspline/measure.hpp"

namespace wspline {

/// Affine map x -> A x + b.
struct AffineMap {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return A * x + b; }
};

/// Principal square root of a symmetric positive definite 2x2 matrix,
/// computed by the closed form (tr s + 2 sqrt(det s))^{-1/2} (s + sqrt(det s) I).
Eigen::Matrix2d sqrt2x2_spd(const Eigen::Matrix2d& sigma);

/// Principal square root of an SPD matrix of any supported shape
/// (1x1, 2x2, or diagonal).
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& sigma);

/// Squared Gaussian Wasserstein distance
/// |m1-m2|^2 + tr(s1^2 + s2^2 - 2 (s1 s2^2 s1)^{1/2}).
double bures_distance2(const Gaussian& g1, const Gaussian& g2);

/// Optimal transport map from g1 to g2: A = s1^{-1}(s1 s2^2 s1)^{1/2} s1^{-1}.
AffineMap gaussian_monge_map(const Gaussian& g1, const Gaussian& g2);

/// Displacement interpolant Bar^t(g1, g2).
Gaussian gaussian_barycenter(const Gaussian& g1, const Gaussian& g2, double t);

/// Generalized barycenter Bar^t_base(g1, g3), built from the optimal maps
/// out of the base point.
Gaussian gaussian_gen_barycenter(const Gaussian& base, const Gaussian& g1,
                                 const Gaussian& g3, double t);

/// Piecewise-cubic path of a diagonal Gaussian curve: one spline for each
/// mean component and one for each standard-deviation eigenvalue.
struct DiagGaussianPath {
  std::vector<CubicSpline> mean;    // d components
  std::vector<CubicSpline> eigen;   // d eigenvalue paths

  int dim() const { return static_cast<int>(mean.size()); }
  Gaussian at(double t) const;
};

/// Exact integral of |sigma''|_F^2 + |m''|^2 over [0,1] for a piecewise-cubic
/// diagonal path.
double diag_spline_energy(const DiagGaussianPath& path);

/// Uniform time sampling of a Gaussian curve.
struct GaussianCurveSample {
  std::vector<Gaussian> frames;  // K+1 Gaussians at t_k = k/K
};

enum class EsplineRegime { Unconstrained, BoxConstrained };

struct GaussianEsplineResult {
  GaussianCurveSample samples;
  DiagGaussianPath path;
  EsplineRegime regime = EsplineRegime::Unconstrained;
};

struct GaussianKeyframe {
  double time = 0.0;             // in [0,1], K*time must be integral
  Eigen::VectorXd mean;
  Eigen::VectorXd std_diag;      // positive entries
};

/// Spline interpolation on diagonal Gaussians. When the unconstrained cubic
/// splines of the mean and every eigenvalue stay above lambda_min the sampled
/// splines are returned directly; otherwise the discrete quadratic problem
/// with the box constraint sigma >= lambda_min is solved by inertial
/// projected gradient.
GaussianEsplineResult gaussian_espline(const std::vector<GaussianKeyframe>& keyframes,
                                       int K,
                                       SplineBc bc = SplineBc::Natural,
                                       double lambda_min = 1e-4);

}  // namespace wspline
