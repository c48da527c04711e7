#include "wspline/sinkhorn.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace wspline {

namespace {

constexpr double kWeightFloor = 1e-12;

// Floors tiny weights so the dual stays finite, renormalizes, and records
// which cells were floored (their gradients are reported as zero).
void floor_weights(const Eigen::VectorXd& w, Eigen::VectorXd& out, std::vector<char>& mask) {
  mask.assign(w.size(), 0);
  out = w;
  for (int i = 0; i < w.size(); ++i)
    if (out[i] < kWeightFloor) {
      out[i] = kWeightFloor;
      mask[i] = 1;
    }
  out /= out.sum();
}

Eigen::MatrixXd as_grid_matrix(const Grid2& g, const Eigen::VectorXd& v) {
  Eigen::MatrixXd m(g.width, g.height);  // rows = x index, cols = y index
  for (int iy = 0; iy < g.height; ++iy)
    for (int ix = 0; ix < g.width; ++ix) m(ix, iy) = v[g.index(ix, iy)];
  return m;
}

Eigen::VectorXd as_flat(const Grid2& g, const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(g.cells());
  for (int iy = 0; iy < g.height; ++iy)
    for (int ix = 0; ix < g.width; ++ix) v[g.index(ix, iy)] = m(ix, iy);
  return v;
}

// out(i,:) = log sum_j exp(in(j,:) - w(i,j)) for a squared-distance weight
// table along one axis.
Eigen::MatrixXd lse_pass(const Eigen::MatrixXd& in, const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows());
  Eigen::MatrixXd out(n, in.cols());
  Eigen::MatrixXd shifted(in.rows(), in.cols());
  for (int i = 0; i < n; ++i) {
    shifted = in.colwise() - w.row(i).transpose();
    const Eigen::RowVectorXd m = shifted.colwise().maxCoeff();
    out.row(i) =
        m.array() +
        (shifted.rowwise() - m).array().exp().colwise().sum().log();
  }
  return out;
}

Eigen::MatrixXd axis_sq_dist(int n, double scale, double eps) {
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = (i - j) * scale;
      w(i, j) = d * d / eps;
    }
  return w;
}

}  // namespace

Eigen::VectorXd gibbs_kernel_lse(const Grid2& grid, const Eigen::VectorXd& log_values,
                                 double eps) {
  if (log_values.size() != grid.cells())
    throw ConfigError("gibbs_kernel_lse: value size does not match grid");
  const Eigen::MatrixXd wx = axis_sq_dist(grid.width, grid.dx(), eps);
  const Eigen::MatrixXd wy = axis_sq_dist(grid.height, grid.dy(), eps);
  Eigen::MatrixXd a = as_grid_matrix(grid, log_values);  // (x, y)
  a = lse_pass(a, wx);                                   // reduce over source x
  a = lse_pass(a.transpose().eval(), wy).transpose();    // reduce over source y
  return as_flat(grid, a);
}

Eigen::VectorXd apply_gibbs_kernel(const Grid2& grid, const Eigen::VectorXd& values,
                                   double eps) {
  if (values.size() != grid.cells())
    throw ConfigError("apply_gibbs_kernel: value size does not match grid");
  const Eigen::MatrixXd kx = (-axis_sq_dist(grid.width, grid.dx(), eps)).array().exp();
  const Eigen::MatrixXd ky = (-axis_sq_dist(grid.height, grid.dy(), eps)).array().exp();
  const Eigen::MatrixXd a = as_grid_matrix(grid, values);
  return as_flat(grid, kx * a * ky.transpose());
}

namespace {

// Shared log-domain loop. lse_cols maps a target-side log vector to the
// source side; lse_rows the reverse.
SinkhornResult sinkhorn_core(
    const Eigen::VectorXd& mu_raw, const Eigen::VectorXd& nu_raw,
    const SinkhornParams& params, const SinkhornState* warm,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& lse_cols,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& lse_rows) {
  if (!(params.eps > 0.0)) throw ConfigError("sinkhorn: eps must be positive");
  SinkhornResult res;
  SinkhornState& st = res.state;
  st.eps = params.eps;
  floor_weights(mu_raw, st.mu, st.mu_floored);
  floor_weights(nu_raw, st.nu, st.nu_floored);
  const Eigen::VectorXd logmu = st.mu.array().log();
  const Eigen::VectorXd lognu = st.nu.array().log();
  const double eps = params.eps;

  st.f = Eigen::VectorXd::Zero(st.mu.size());
  st.g = Eigen::VectorXd::Zero(st.nu.size());
  if (warm && warm->f.size() == st.f.size() && warm->g.size() == st.g.size()) {
    st.f = warm->f;
    st.g = warm->g;
  }

  for (st.iterations = 1; st.iterations <= params.max_iter; ++st.iterations) {
    st.f = -eps * lse_cols(st.g / eps + lognu);
    const Eigen::VectorXd g_new = -eps * lse_rows(st.f / eps + logmu);
    if (!g_new.allFinite() || !st.f.allFinite())
      throw EpsTooSmallError("sinkhorn: potentials overflow, eps too small");
    st.marginal_violation =
        (st.nu.array() * (((st.g - g_new) / eps).array().exp() - 1.0)).abs().maxCoeff();
    st.g = g_new;
    if (st.marginal_violation <= params.tol) {
      st.converged = true;
      break;
    }
  }
  if (!st.converged)
    throw NoConvergenceError("sinkhorn: no convergence after " +
                             std::to_string(params.max_iter) + " iterations, violation " +
                             std::to_string(st.marginal_violation));

  // plan mass correction (vanishes at exact convergence)
  const Eigen::VectorXd f_check = -eps * lse_cols(st.g / eps + lognu);
  const double mass = (st.mu.array() * ((st.f - f_check) / eps).array().exp()).sum();
  res.cost = st.f.dot(st.mu) + st.g.dot(st.nu) - eps * (mass - 1.0);
  return res;
}

}  // namespace

SinkhornResult sinkhorn_grid_raw(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const SinkhornParams& params, const SinkhornState* warm) {
  if (!(mu.grid() == nu.grid()))
    throw ConfigError("sinkhorn_grid_raw: measures live on different grids");
  const Grid2 grid = mu.grid();
  const double eps = params.eps;
  auto lse = [grid, eps](const Eigen::VectorXd& t) {
    return gibbs_kernel_lse(grid, t, eps);
  };
  return sinkhorn_core(mu.weights(), nu.weights(), params, warm, lse, lse);
}

SinkhornResult sinkhorn_points_raw(const WeightedPoints& mu, const WeightedPoints& nu,
                                   const SinkhornParams& params, const SinkhornState* warm) {
  if (mu.dim() != nu.dim()) throw ConfigError("sinkhorn_points_raw: dimension mismatch");
  Eigen::MatrixXd c(mu.size(), nu.size());
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j)
      c(i, j) = (mu.points.row(i) - nu.points.row(j)).squaredNorm();
  const Eigen::MatrixXd ce = c / params.eps;
  auto lse_cols = [ce](const Eigen::VectorXd& t) {
    Eigen::VectorXd out(ce.rows());
    for (int i = 0; i < ce.rows(); ++i) {
      const Eigen::ArrayXd v = t.transpose().array() - ce.row(i).array();
      const double m = v.maxCoeff();
      out[i] = m + std::log((v - m).exp().sum());
    }
    return out;
  };
  auto lse_rows = [ce](const Eigen::VectorXd& t) {
    Eigen::VectorXd out(ce.cols());
    for (int j = 0; j < ce.cols(); ++j) {
      const Eigen::ArrayXd v = t.array() - ce.col(j).array();
      const double m = v.maxCoeff();
      out[j] = m + std::log((v - m).exp().sum());
    }
    return out;
  };
  return sinkhorn_core(mu.weights, nu.weights, params, warm, lse_cols, lse_rows);
}

double sinkhorn_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const SinkhornParams& params) {
  const double w = sinkhorn_grid_raw(mu, nu, params).cost;
  if (!params.debias) return w;
  const double s1 = sinkhorn_grid_raw(mu, mu, params).cost;
  const double s2 = sinkhorn_grid_raw(nu, nu, params).cost;
  return w - 0.5 * s1 - 0.5 * s2;
}

double sinkhorn_distance(const WeightedPoints& mu, const WeightedPoints& nu,
                         const SinkhornParams& params) {
  const double w = sinkhorn_points_raw(mu, nu, params).cost;
  if (!params.debias) return w;
  const double s1 = sinkhorn_points_raw(mu, mu, params).cost;
  const double s2 = sinkhorn_points_raw(nu, nu, params).cost;
  return w - 0.5 * s1 - 0.5 * s2;
}

Eigen::VectorXd sinkhorn_grad_weights(const SinkhornState& state, MarginalSide side) {
  if (!state.converged)
    throw NotConvergedError("sinkhorn_grad_weights: state not converged");
  const Eigen::VectorXd& pot = side == MarginalSide::Source ? state.f : state.g;
  const std::vector<char>& mask =
      side == MarginalSide::Source ? state.mu_floored : state.nu_floored;
  Eigen::VectorXd grad = pot.array() - pot.mean();
  for (int i = 0; i < grad.size(); ++i)
    if (mask[i]) grad[i] = 0.0;
  return grad;
}

EntropicBarycenter entropic_barycenter(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                                       double t, double eps, double tol, int max_iter) {
  if (!(mu1.grid() == mu2.grid()))
    throw ConfigError("entropic_barycenter: measures live on different grids");
  if (t < 0.0 || t > 1.0) throw ConfigError("entropic_barycenter: t outside [0,1]");
  const Grid2 grid = mu1.grid();
  const double l1 = 1.0 - t, l2 = t;

  Eigen::VectorXd w1, w2;
  std::vector<char> m1, m2;
  floor_weights(mu1.weights(), w1, m1);
  floor_weights(mu2.weights(), w2, m2);
  const Eigen::VectorXd logmu1 = w1.array().log();
  const Eigen::VectorXd logmu2 = w2.array().log();

  const int n = grid.cells();
  Eigen::VectorXd logv1 = Eigen::VectorXd::Zero(n), logv2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd logb = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd logd = l1 * logmu1 + l2 * logmu2;

  EntropicBarycenter out{DiscreteMeasure(grid, Eigen::VectorXd::Ones(n)), 0, 0.0};
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd logu1 = logmu1 - gibbs_kernel_lse(grid, logv1, eps);
    const Eigen::VectorXd logu2 = logmu2 - gibbs_kernel_lse(grid, logv2, eps);
    const Eigen::VectorXd logku1 = gibbs_kernel_lse(grid, logu1, eps);
    const Eigen::VectorXd logku2 = gibbs_kernel_lse(grid, logu2, eps);
    Eigen::VectorXd logd_new = logb + l1 * logku1 + l2 * logku2;
    logv1 = logd_new - logku1;
    logv2 = logd_new - logku2;
    // debiasing fixed point b <- sqrt(b d / K b)
    logb = 0.5 * (logb + logd_new - gibbs_kernel_lse(grid, logb, eps));
    if (!logd_new.allFinite())
      throw EpsTooSmallError("entropic_barycenter: overflow, eps too small");
    out.residual = (logd_new.array().exp() - logd.array().exp()).abs().maxCoeff();
    logd = logd_new;
    out.iterations = it;
    if (out.residual <= tol) {
      out.result = DiscreteMeasure(grid, logd.array().exp());
      return out;
    }
  }
  throw NoConvergenceError("entropic_barycenter: no convergence after " +
                           std::to_string(max_iter) + " iterations, residual " +
                           std::to_string(out.residual));
}

}  // namespace wspline
