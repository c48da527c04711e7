#include "wspline/gaussian.hpp"

#include <cmath>

namespace wspline {

namespace {

bool matrix_is_diagonal(const Eigen::MatrixXd& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > 1e-14 * (1.0 + std::abs(m(i, i))))
        return false;
  return true;
}

}  // namespace

Eigen::Matrix2d sqrt2x2_spd(const Eigen::Matrix2d& sigma) {
  const double tr = sigma.trace();
  const double det = sigma.determinant();
  if (!(det > 0.0) || !(tr > 0.0)) throw NotSPDError("sqrt2x2_spd: input not positive definite");
  const double s = std::sqrt(det);
  return (sigma + s * Eigen::Matrix2d::Identity()) / std::sqrt(tr + 2.0 * s);
}

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& sigma) {
  const int d = static_cast<int>(sigma.rows());
  if (d == 1) {
    if (!(sigma(0, 0) > 0.0)) throw NotSPDError("spd_sqrt: nonpositive scalar");
    Eigen::MatrixXd r(1, 1);
    r(0, 0) = std::sqrt(sigma(0, 0));
    return r;
  }
  if (matrix_is_diagonal(sigma)) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      if (!(sigma(i, i) > 0.0)) throw NotSPDError("spd_sqrt: nonpositive diagonal entry");
      r(i, i) = std::sqrt(sigma(i, i));
    }
    return r;
  }
  if (d == 2) return sqrt2x2_spd(sigma);
  throw NotSPDError("spd_sqrt: only 1x1, 2x2, or diagonal matrices supported");
}

double bures_distance2(const Gaussian& g1, const Gaussian& g2) {
  if (g1.dim() != g2.dim()) throw ConfigError("bures_distance2: dimension mismatch");
  const Eigen::MatrixXd& s1 = g1.std_matrix();
  const Eigen::MatrixXd& s2 = g2.std_matrix();
  const Eigen::MatrixXd cross = spd_sqrt(s1 * s2 * s2 * s1);
  const double bures = (s1 * s1 + s2 * s2 - 2.0 * cross).trace();
  const double dm2 = (g1.mean() - g2.mean()).squaredNorm();
  // clamp tiny negative round-off in the covariance part
  return dm2 + std::max(bures, 0.0);
}

AffineMap gaussian_monge_map(const Gaussian& g1, const Gaussian& g2) {
  if (g1.dim() != g2.dim()) throw ConfigError("gaussian_monge_map: dimension mismatch");
  const Eigen::MatrixXd& s1 = g1.std_matrix();
  const Eigen::MatrixXd& s2 = g2.std_matrix();
  const Eigen::MatrixXd inv = s1.inverse();
  AffineMap map;
  map.A = inv * spd_sqrt(s1 * s2 * s2 * s1) * inv;
  map.A = 0.5 * (map.A + map.A.transpose().eval());  // symmetrize round-off
  map.b = g2.mean() - map.A * g1.mean();
  return map;
}

Gaussian gaussian_barycenter(const Gaussian& g1, const Gaussian& g2, double t) {
  if (t < 0.0 || t > 1.0) throw ConfigError("gaussian_barycenter: t outside [0,1]");
  const Eigen::MatrixXd& s1 = g1.std_matrix();
  const AffineMap map = gaussian_monge_map(g1, g2);
  const int d = g1.dim();
  // interpolated map ((1-t)I + tA) pushes g1 to the t-barycenter
  const Eigen::MatrixXd m =
      ((1.0 - t) * Eigen::MatrixXd::Identity(d, d) + t * map.A) * s1;
  return Gaussian((1.0 - t) * g1.mean() + t * g2.mean(), spd_sqrt(m * m.transpose()));
}

Gaussian gaussian_gen_barycenter(const Gaussian& base, const Gaussian& g1,
                                 const Gaussian& g3, double t) {
  if (t < 0.0 || t > 1.0) throw ConfigError("gaussian_gen_barycenter: t outside [0,1]");
  const AffineMap t1 = gaussian_monge_map(base, g1);
  const AffineMap t3 = gaussian_monge_map(base, g3);
  const Eigen::MatrixXd a = (1.0 - t) * t1.A + t * t3.A;
  const Eigen::MatrixXd m = a * base.std_matrix();
  return Gaussian((1.0 - t) * g1.mean() + t * g3.mean(), spd_sqrt(m * m.transpose()));
}

Gaussian DiagGaussianPath::at(double t) const {
  const int d = dim();
  Eigen::VectorXd m(d), s(d);
  for (int j = 0; j < d; ++j) {
    m[j] = mean[j](t);
    s[j] = eigen[j](t);
  }
  return Gaussian::diagonal(m, s);
}

double diag_spline_energy(const DiagGaussianPath& path) {
  double e = 0.0;
  for (const auto& c : path.mean) e += c.accel_energy();
  for (const auto& c : path.eigen) e += c.accel_energy();
  return e;
}

namespace {

// Minimize sum over interior k of |x_k - (x_{k-1}+x_{k+1})/2|^2 with values
// pinned at `pinned` indices and an optional lower bound, by accelerated
// projected gradient. The quadratic's gradient Lipschitz constant is <= 8.
std::vector<double> solve_discrete_channel(int K, const std::vector<int>& pin_idx,
                                           const std::vector<double>& pin_val,
                                           const std::vector<double>& init,
                                           bool periodic, double lower_bound,
                                           bool bounded) {
  std::vector<double> x = init;
  std::vector<char> pinned(K + 1, 0);
  for (size_t i = 0; i < pin_idx.size(); ++i) {
    pinned[pin_idx[i]] = 1;
    x[pin_idx[i]] = pin_val[i];
  }
  const double step = 1.0 / 8.0;
  const int max_iter = 400000;
  double tk = 1.0;
  std::vector<double> y = x, grad(K + 1);
  for (int it = 0; it < max_iter; ++it) {
    // gradient of (1/4) sum_k (y_{k+1}-2y_k+y_{k-1})^2 over interior k
    std::fill(grad.begin(), grad.end(), 0.0);
    auto at = [&](int k) {
      if (periodic) return y[((k % K) + K) % K];
      return y[k];
    };
    const int k_lo = periodic ? 0 : 1;
    const int k_hi = periodic ? K - 1 : K - 1;
    for (int k = k_lo; k <= k_hi; ++k) {
      const double r = at(k + 1) - 2.0 * at(k) + at(k - 1);
      auto add = [&](int idx, double v) {
        int j = periodic ? ((idx % K) + K) % K : idx;
        grad[j] += v;
      };
      add(k + 1, 0.5 * r);
      add(k, -r);
      add(k - 1, 0.5 * r);
    }
    double delta = 0.0;
    std::vector<double> xn(K + 1);
    for (int k = 0; k <= K; ++k) {
      if (pinned[k]) {
        xn[k] = x[k];
        continue;
      }
      if (periodic && k == K) continue;
      double v = y[k] - step * grad[k];
      if (bounded && v < lower_bound) v = lower_bound;
      xn[k] = v;
      delta = std::max(delta, std::abs(v - x[k]));
    }
    if (periodic) xn[K] = xn[0];
    const double tk1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    for (int k = 0; k <= K; ++k)
      y[k] = xn[k] + (tk - 1.0) / tk1 * (xn[k] - x[k]);
    tk = tk1;
    x = xn;
    if (delta < 1e-14 && it > 10) break;
  }
  return x;
}

}  // namespace

GaussianEsplineResult gaussian_espline(const std::vector<GaussianKeyframe>& keyframes,
                                       int K, SplineBc bc, double lambda_min) {
  if (keyframes.size() < 2) throw ConfigError("gaussian_espline: need >= 2 keyframes");
  if (K < 2) throw ConfigError("gaussian_espline: K must be >= 2");
  const int d = static_cast<int>(keyframes.front().mean.size());
  std::vector<double> times;
  std::vector<int> pin_idx;
  for (const auto& kf : keyframes) {
    if (kf.mean.size() != d || kf.std_diag.size() != d)
      throw ConfigError("gaussian_espline: keyframe dimension mismatch");
    if ((kf.std_diag.array() < lambda_min).any())
      throw InfeasibleConstraintError("gaussian_espline: keyframe eigenvalue below floor");
    const double kt = kf.time * K;
    if (std::abs(kt - std::round(kt)) > 1e-9)
      throw ConfigError("gaussian_espline: K * keyframe time must be integral");
    times.push_back(kf.time);
    pin_idx.push_back(static_cast<int>(std::round(kt)));
  }
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ConfigError("gaussian_espline: keyframe times must strictly increase");

  const bool periodic = bc == SplineBc::Periodic;
  auto fit = [&](const std::vector<double>& vals) {
    return CubicSpline(times, vals, bc);
  };

  GaussianEsplineResult res;
  for (int j = 0; j < d; ++j) {
    std::vector<double> mv, sv;
    for (const auto& kf : keyframes) {
      mv.push_back(kf.mean[j]);
      sv.push_back(kf.std_diag[j]);
    }
    res.path.mean.push_back(fit(mv));
    res.path.eigen.push_back(fit(sv));
  }

  // positivity scan of the unconstrained eigenvalue splines
  bool feasible = true;
  for (const auto& c : res.path.eigen) {
    for (int s = 0; s <= 200 && feasible; ++s) {
      const double t = times.front() + (times.back() - times.front()) * s / 200.0;
      if (c(t) < lambda_min) feasible = false;
    }
  }

  if (feasible) {
    res.regime = EsplineRegime::Unconstrained;
    for (int k = 0; k <= K; ++k) {
      const double t = static_cast<double>(k) / K;
      res.samples.frames.push_back(res.path.at(t));
    }
    return res;
  }

  // constrained regime: discrete quadratic problem with the box constraint
  // on eigenvalues, unconstrained for means
  res.regime = EsplineRegime::BoxConstrained;
  std::vector<Eigen::VectorXd> means(K + 1, Eigen::VectorXd(d));
  std::vector<Eigen::VectorXd> stds(K + 1, Eigen::VectorXd(d));
  for (int j = 0; j < d; ++j) {
    std::vector<double> pm, ps, im(K + 1), is(K + 1);
    for (const auto& kf : keyframes) {
      pm.push_back(kf.mean[j]);
      ps.push_back(kf.std_diag[j]);
    }
    for (int k = 0; k <= K; ++k) {
      const double t = static_cast<double>(k) / K;
      im[k] = res.path.mean[j](t);
      is[k] = std::max(res.path.eigen[j](t), lambda_min);
    }
    const auto xm = solve_discrete_channel(K, pin_idx, pm, im, periodic, 0.0, false);
    const auto xs = solve_discrete_channel(K, pin_idx, ps, is, periodic, lambda_min, true);
    for (int k = 0; k <= K; ++k) {
      means[k][j] = xm[k];
      stds[k][j] = xs[k];
    }
  }
  for (int k = 0; k <= K; ++k)
    res.samples.frames.push_back(Gaussian::diagonal(means[k], stds[k]));

  // path through the discrete solution for plotting and energy evaluation
  std::vector<double> tk(K + 1);
  for (int k = 0; k <= K; ++k) tk[k] = static_cast<double>(k) / K;
  DiagGaussianPath discrete_path;
  for (int j = 0; j < d; ++j) {
    std::vector<double> mv(K + 1), sv(K + 1);
    for (int k = 0; k <= K; ++k) {
      mv[k] = means[k][j];
      sv[k] = stds[k][j];
    }
    discrete_path.mean.emplace_back(tk, mv, periodic ? SplineBc::Periodic : SplineBc::Natural);
    discrete_path.eigen.emplace_back(tk, sv, periodic ? SplineBc::Periodic : SplineBc::Natural);
  }
  res.path = std::move(discrete_path);
  return res;
}

}  // namespace wspline
