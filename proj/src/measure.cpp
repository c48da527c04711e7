#include "wspline/measure.hpp"

#include <cmath>

namespace wspline {

namespace {
constexpr double kMassTol = 1e-6;
}

DiscreteMeasure::DiscreteMeasure(Grid2 grid, Eigen::VectorXd weights)
    : grid_(grid), w_(std::move(weights)) {
  if (w_.size() != grid_.cells())
    throw ConfigError("DiscreteMeasure: weight count does not match grid");
  if ((w_.array() < 0.0).any())
    throw NegativeMassError("DiscreteMeasure: negative weight");
  const double total = w_.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw AllZeroError("DiscreteMeasure: total mass is zero or not finite");
  flagged_ = std::abs(total - 1.0) > kMassTol;
  w_ /= total;
}

PointCloud::PointCloud(Eigen::MatrixXd points) : pts_(std::move(points)) {
  if (pts_.rows() < 1) throw ConfigError("PointCloud: need at least one atom");
  if (pts_.cols() < 1 || pts_.cols() > 2)
    throw ConfigError("PointCloud: dimension must be 1 or 2");
  if (!pts_.allFinite()) throw ConfigError("PointCloud: non-finite coordinate");
}

Gaussian::Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd std_matrix)
    : mean_(std::move(mean)), std_(std::move(std_matrix)) {
  const int d = static_cast<int>(mean_.size());
  if (std_.rows() != d || std_.cols() != d)
    throw ConfigError("Gaussian: mean/std dimension mismatch");
  if (!std_.isApprox(std_.transpose(), 1e-12))
    throw NotSPDError("Gaussian: std matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(std_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NotSPDError("Gaussian: std matrix not positive definite");
  if (d > 2 && !is_diagonal())
    throw ConfigError("Gaussian: full std matrices supported only for d <= 2");
}

Gaussian Gaussian::diagonal(Eigen::VectorXd mean, Eigen::VectorXd std_diag) {
  return Gaussian(std::move(mean), Eigen::MatrixXd(std_diag.asDiagonal()));
}

bool Gaussian::is_diagonal() const {
  for (int i = 0; i < std_.rows(); ++i)
    for (int j = 0; j < std_.cols(); ++j)
      if (i != j && std_(i, j) != 0.0) return false;
  return true;
}

double Gaussian::density(const Eigen::VectorXd& x) const {
  const int d = dim();
  const Eigen::MatrixXd cov = std_ * std_;
  const Eigen::VectorXd z = x - mean_;
  const double quad = z.dot(cov.llt().solve(z));
  const double norm = std::pow(2.0 * M_PI, -0.5 * d) / std_.determinant();
  return norm * std::exp(-0.5 * quad);
}

DiscreteMeasure measure_from_density_grid(const Grid2& grid, const Eigen::VectorXd& raw) {
  if (raw.size() != grid.cells())
    throw ConfigError("measure_from_density_grid: size mismatch");
  if ((raw.array() < 0.0).any())
    throw NegativeMassError("measure_from_density_grid: negative entry");
  if (raw.sum() <= 0.0)
    throw AllZeroError("measure_from_density_grid: all entries zero");
  return DiscreteMeasure(grid, raw);
}

DiscreteMeasure rasterize_gaussian(const Gaussian& g, const Grid2& grid) {
  if (g.dim() != 2) throw ConfigError("rasterize_gaussian: grid mode needs d=2");
  Eigen::VectorXd w(grid.cells());
  Eigen::VectorXd x(2);
  for (int iy = 0; iy < grid.height; ++iy)
    for (int ix = 0; ix < grid.width; ++ix) {
      x << grid.center_x(ix), grid.center_y(iy);
      w[grid.index(ix, iy)] = g.density(x);
    }
  if (w.sum() <= 0.0)
    throw DegenerateRasterError("rasterize_gaussian: density underflows on every cell");
  return DiscreteMeasure(grid, w);
}

std::pair<Eigen::Vector2d, Eigen::Matrix2d> moments(const DiscreteMeasure& mu) {
  const Grid2& g = mu.grid();
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (int iy = 0; iy < g.height; ++iy)
    for (int ix = 0; ix < g.width; ++ix)
      mean += mu(ix, iy) * Eigen::Vector2d(g.center_x(ix), g.center_y(iy));
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (int iy = 0; iy < g.height; ++iy)
    for (int ix = 0; ix < g.width; ++ix) {
      const Eigen::Vector2d z = Eigen::Vector2d(g.center_x(ix), g.center_y(iy)) - mean;
      cov += mu(ix, iy) * z * z.transpose();
    }
  return {mean, cov};
}

}  // namespace wspline
