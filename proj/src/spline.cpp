#include "wspline/spline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json.hpp"

namespace wspline {

BoundaryCondition bc_from_string(const std::string& s) {
  if (s == "natural") return BoundaryCondition::Natural;
  if (s == "hermite") return BoundaryCondition::Hermite;
  if (s == "periodic") return BoundaryCondition::Periodic;
  throw ConfigError("unknown boundary condition: " + s);
}

std::string bc_to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Natural: return "natural";
    case BoundaryCondition::Hermite: return "hermite";
    case BoundaryCondition::Periodic: return "periodic";
  }
  return "natural";
}

std::string EnergyBreakdown::to_json() const {
  nlohmann::json j;
  j["total"] = total;
  j["spline_terms"] = spline_terms;
  j["path_terms"] = path_terms;
  j["backend"] = backend;
  j["K"] = K;
  j["delta"] = delta;
  j["eps"] = eps;
  return j.dump(2);
}

namespace {

// Shared term collection. Natural and Hermite boundary conditions sum the
// spline terms over interior indices 1..K-1; periodic wraps, summing to K
// with mu_{K+1} identified with mu_1 (the tuple must close, mu_0 = mu_K).
template <typename M>
EnergyBreakdown collect_energies(
    const std::vector<M>& tuple, double delta, BoundaryCondition bc,
    const std::function<double(const M&, const M&)>& dist,
    const std::function<double(int, const M&, const M&, const M&)>& spline_term,
    const std::function<bool(const M&, const M&)>& same) {
  const int K = static_cast<int>(tuple.size()) - 1;
  if (K < 2) throw ConfigError("energy: need at least K+1 = 3 frames");
  if (bc == BoundaryCondition::Periodic && !same(tuple.front(), tuple.back()))
    throw ConfigError("energy: periodic tuple must close (first frame equals last)");

  EnergyBreakdown e;
  e.K = K;
  e.delta = delta;
  for (int k = 0; k < K; ++k) e.path_terms.push_back(dist(tuple[k], tuple[k + 1]));
  const int k_hi = bc == BoundaryCondition::Periodic ? K : K - 1;
  for (int k = 1; k <= k_hi; ++k) {
    const M& prev = tuple[k - 1];
    const M& next = k + 1 <= K ? tuple[k + 1] : tuple[1];
    e.spline_terms.push_back(spline_term(k, prev, tuple[k], next));
  }
  double sp = 0.0, pa = 0.0;
  for (double v : e.spline_terms) sp += v;
  for (double v : e.path_terms) pa += v;
  e.total = 4.0 * K * K * K * sp + delta * K * pa;
  return e;
}

bool gaussian_same(const Gaussian& a, const Gaussian& b) {
  return a.dim() == b.dim() && (a.mean() - b.mean()).cwiseAbs().maxCoeff() <= 1e-12 &&
         (a.std_matrix() - b.std_matrix()).cwiseAbs().maxCoeff() <= 1e-12;
}

bool points_same(const WeightedPoints& a, const WeightedPoints& b) {
  return a.points.rows() == b.points.rows() && a.points.cols() == b.points.cols() &&
         (a.points - b.points).cwiseAbs().maxCoeff() <= 1e-12 &&
         (a.weights - b.weights).cwiseAbs().maxCoeff() <= 1e-12;
}

bool grid_same(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return a.grid() == b.grid() &&
         (a.weights() - b.weights()).cwiseAbs().maxCoeff() == 0.0;
}

EnergyBreakdown gaussian_energies(const std::vector<Gaussian>& tuple, double delta,
                                  BoundaryCondition bc, bool generalized) {
  auto dist = [](const Gaussian& a, const Gaussian& b) { return bures_distance2(a, b); };
  std::function<double(int, const Gaussian&, const Gaussian&, const Gaussian&)> term;
  if (generalized)
    term = [](int, const Gaussian& p, const Gaussian& c, const Gaussian& n) {
      return bures_distance2(c, gaussian_gen_barycenter(c, p, n, 0.5));
    };
  else
    term = [](int, const Gaussian& p, const Gaussian& c, const Gaussian& n) {
      return bures_distance2(c, gaussian_barycenter(p, n, 0.5));
    };
  auto e = collect_energies<Gaussian>(tuple, delta, bc, dist, term, gaussian_same);
  e.backend = generalized ? "gaussian-generalized" : "gaussian";
  return e;
}

double point_dist(const WeightedPoints& a, const WeightedPoints& b) {
  if (a.dim() == 1) return wasserstein2_1d(a, b);
  return wasserstein2_exact_small(a, b).cost;
}

EnergyBreakdown point_energies(const std::vector<WeightedPoints>& tuple, double delta,
                               BoundaryCondition bc) {
  std::function<double(int, const WeightedPoints&, const WeightedPoints&,
                       const WeightedPoints&)>
      term = [](int, const WeightedPoints& p, const WeightedPoints& c,
                const WeightedPoints& n) {
        const WeightedPoints bar =
            p.dim() == 1 ? quantile_barycenter(p, n, 0.5) : exact_barycenter(p, n, 0.5);
        return point_dist(c, bar);
      };
  auto e = collect_energies<WeightedPoints>(tuple, delta, bc, point_dist, term,
                                            points_same);
  e.backend = tuple.front().dim() == 1 ? "quantile-1d" : "exact-small";
  return e;
}

EnergyBreakdown grid_energies(const std::vector<DiscreteMeasure>& tuple, double delta,
                              const SinkhornParams& params, BoundaryCondition bc) {
  auto dist = [&params](const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return sinkhorn_distance(a, b, params);
  };
  std::function<double(int, const DiscreteMeasure&, const DiscreteMeasure&,
                       const DiscreteMeasure&)>
      term = [&params](int, const DiscreteMeasure& p, const DiscreteMeasure& c,
                       const DiscreteMeasure& n) {
        const auto bar =
            entropic_barycenter(p, n, 0.5, params.eps, params.tol, params.max_iter);
        return sinkhorn_distance(c, bar.result, params);
      };
  auto e = collect_energies<DiscreteMeasure>(tuple, delta, bc, dist, term, grid_same);
  e.backend = "entropic";
  e.eps = params.eps;
  return e;
}

}  // namespace

double discrete_path_energy(const std::vector<Gaussian>& tuple) {
  const int K = static_cast<int>(tuple.size()) - 1;
  if (K < 1) throw ConfigError("discrete_path_energy: need at least 2 frames");
  double s = 0.0;
  for (int k = 0; k < K; ++k) s += bures_distance2(tuple[k], tuple[k + 1]);
  return K * s;
}

double discrete_spline_energy(const std::vector<Gaussian>& tuple, BoundaryCondition bc) {
  const auto e = gaussian_energies(tuple, 0.0, bc, false);
  return e.total;
}

double discrete_gen_spline_energy(const std::vector<Gaussian>& tuple, BoundaryCondition bc) {
  const auto e = gaussian_energies(tuple, 0.0, bc, true);
  return e.total;
}

EnergyBreakdown full_objective(const std::vector<Gaussian>& tuple, double delta,
                               BoundaryCondition bc, bool generalized) {
  return gaussian_energies(tuple, delta, bc, generalized);
}

WeightedPoints exact_barycenter(const WeightedPoints& mu, const WeightedPoints& nu,
                                double t) {
  const ExactOtResult ot = wasserstein2_exact_small(mu, nu);
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> w;
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j)
      if (ot.coupling.plan(i, j) > 1e-14) {
        pts.push_back((1.0 - t) * mu.points.row(i).transpose() +
                      t * nu.points.row(j).transpose());
        w.push_back(ot.coupling.plan(i, j));
      }
  Eigen::MatrixXd p(pts.size(), mu.dim());
  Eigen::VectorXd wv(pts.size());
  for (size_t a = 0; a < pts.size(); ++a) {
    p.row(a) = pts[a].transpose();
    wv[a] = w[a];
  }
  return WeightedPoints(p, wv);
}

WeightedPoints quantile_barycenter(const WeightedPoints& mu, const WeightedPoints& nu,
                                   double t) {
  if (mu.dim() != 1 || nu.dim() != 1)
    throw ConfigError("quantile_barycenter: measures must be 1D");
  std::vector<int> ia(mu.size()), ib(nu.size());
  for (int i = 0; i < mu.size(); ++i) ia[i] = i;
  for (int j = 0; j < nu.size(); ++j) ib[j] = j;
  std::sort(ia.begin(), ia.end(),
            [&mu](int a, int b) { return mu.points(a, 0) < mu.points(b, 0); });
  std::sort(ib.begin(), ib.end(),
            [&nu](int a, int b) { return nu.points(a, 0) < nu.points(b, 0); });
  std::vector<double> xs, ws;
  size_t i = 0, j = 0;
  double ra = mu.weights[ia[0]], rb = nu.weights[ib[0]];
  while (i < ia.size() && j < ib.size()) {
    const double chunk = std::min(ra, rb);
    if (chunk > 1e-15) {
      xs.push_back((1.0 - t) * mu.points(ia[i], 0) + t * nu.points(ib[j], 0));
      ws.push_back(chunk);
    }
    ra -= chunk;
    rb -= chunk;
    if (ra <= 1e-15) {
      ++i;
      if (i < ia.size()) ra = mu.weights[ia[i]];
    }
    if (rb <= 1e-15) {
      ++j;
      if (j < ib.size()) rb = nu.weights[ib[j]];
    }
  }
  Eigen::MatrixXd p(xs.size(), 1);
  Eigen::VectorXd w(xs.size());
  for (size_t a = 0; a < xs.size(); ++a) {
    p(a, 0) = xs[a];
    w[a] = ws[a];
  }
  return WeightedPoints(p, w);
}

double discrete_path_energy(const std::vector<WeightedPoints>& tuple) {
  const int K = static_cast<int>(tuple.size()) - 1;
  if (K < 1) throw ConfigError("discrete_path_energy: need at least 2 frames");
  double s = 0.0;
  for (int k = 0; k < K; ++k) s += point_dist(tuple[k], tuple[k + 1]);
  return K * s;
}

double discrete_spline_energy(const std::vector<WeightedPoints>& tuple,
                              BoundaryCondition bc) {
  return point_energies(tuple, 0.0, bc).total;
}

EnergyBreakdown full_objective(const std::vector<WeightedPoints>& tuple, double delta,
                               BoundaryCondition bc) {
  return point_energies(tuple, delta, bc);
}

double discrete_path_energy(const std::vector<DiscreteMeasure>& tuple,
                            const SinkhornParams& params) {
  const int K = static_cast<int>(tuple.size()) - 1;
  if (K < 1) throw ConfigError("discrete_path_energy: need at least 2 frames");
  double s = 0.0;
  for (int k = 0; k < K; ++k) s += sinkhorn_distance(tuple[k], tuple[k + 1], params);
  return K * s;
}

double discrete_spline_energy(const std::vector<DiscreteMeasure>& tuple,
                              const SinkhornParams& params, BoundaryCondition bc) {
  return grid_energies(tuple, 0.0, params, bc).total;
}

EnergyBreakdown full_objective(const std::vector<DiscreteMeasure>& tuple, double delta,
                               const SinkhornParams& params, BoundaryCondition bc) {
  return grid_energies(tuple, delta, params, bc);
}

void check_constraints(const std::vector<DiscreteMeasure>& tuple,
                       const std::vector<int>& pinned,
                       const std::vector<DiscreteMeasure>& keyframes) {
  if (pinned.size() != keyframes.size())
    throw ConfigError("check_constraints: pinned/keyframe count mismatch");
  for (size_t i = 0; i < pinned.size(); ++i) {
    const int k = pinned[i];
    if (k < 0 || k >= static_cast<int>(tuple.size()))
      throw ConstraintViolatedError(k, "pinned index out of range");
    if (!grid_same(tuple[k], keyframes[i]))
      throw ConstraintViolatedError(k, "frame " + std::to_string(k) +
                                           " differs from its keyframe");
  }
}

void check_constraints(const std::vector<WeightedPoints>& tuple,
                       const std::vector<int>& pinned,
                       const std::vector<WeightedPoints>& keyframes) {
  if (pinned.size() != keyframes.size())
    throw ConfigError("check_constraints: pinned/keyframe count mismatch");
  for (size_t i = 0; i < pinned.size(); ++i) {
    const int k = pinned[i];
    if (k < 0 || k >= static_cast<int>(tuple.size()))
      throw ConstraintViolatedError(k, "pinned index out of range");
    if (!points_same(tuple[k], keyframes[i]))
      throw ConstraintViolatedError(k, "frame " + std::to_string(k) +
                                           " differs from its keyframe");
  }
}

// ---- temporal extension ----

TemporalExtension::TemporalExtension(std::vector<Eigen::VectorXd> knots)
    : knots_(std::move(knots)) {
  if (knots_.size() < 3) throw ConfigError("TemporalExtension: need K >= 2 knots");
  for (const auto& k : knots_)
    if (k.size() != knots_.front().size())
      throw ConfigError("TemporalExtension: knot dimension mismatch");
}

Eigen::VectorXd TemporalExtension::operator()(double t) const {
  const int K = this->K();
  const double half = 0.5 / K;
  if (t <= half) return knots_[0] + (knots_[1] - knots_[0]) * (K * t);
  if (t >= 1.0 - half)
    return knots_[K - 1] +
           (knots_[K] - knots_[K - 1]) * (K * (t - static_cast<double>(K - 1) / K));
  const int k = std::clamp(static_cast<int>(std::floor(t * K + 0.5)), 1, K - 1);
  const double s = t - (k - 0.5) / K;
  return 0.5 * (knots_[k - 1] + knots_[k]) + (knots_[k] - knots_[k - 1]) * (K * s) +
         (knots_[k + 1] - 2.0 * knots_[k] + knots_[k - 1]) * (0.5 * K * K * s * s);
}

Eigen::VectorXd TemporalExtension::deriv(double t) const {
  const int K = this->K();
  const double half = 0.5 / K;
  if (t <= half) return (knots_[1] - knots_[0]) * static_cast<double>(K);
  if (t >= 1.0 - half) return (knots_[K] - knots_[K - 1]) * static_cast<double>(K);
  const int k = std::clamp(static_cast<int>(std::floor(t * K + 0.5)), 1, K - 1);
  const double s = t - (k - 0.5) / K;
  return (knots_[k] - knots_[k - 1]) * static_cast<double>(K) +
         (knots_[k + 1] - 2.0 * knots_[k] + knots_[k - 1]) *
             (static_cast<double>(K) * K * s);
}

Eigen::VectorXd TemporalExtension::deriv2(double t) const {
  const int K = this->K();
  const double half = 0.5 / K;
  if (t <= half || t >= 1.0 - half)
    return Eigen::VectorXd::Zero(knots_.front().size());
  const int k = std::clamp(static_cast<int>(std::floor(t * K + 0.5)), 1, K - 1);
  return (knots_[k + 1] - 2.0 * knots_[k] + knots_[k - 1]) * static_cast<double>(K) * K;
}

double TemporalExtension::path_energy() const {
  const int K = this->K();
  // end half-intervals carry constant slope K*(first/last difference)
  double e = 0.5 * K * (knots_[1] - knots_[0]).squaredNorm() +
             0.5 * K * (knots_[K] - knots_[K - 1]).squaredNorm();
  // interior pieces have affine slope a + b s, s in [0, 1/K]
  const double h = 1.0 / K;
  for (int k = 1; k < K; ++k) {
    const Eigen::VectorXd a = (knots_[k] - knots_[k - 1]) * static_cast<double>(K);
    const Eigen::VectorXd b =
        (knots_[k + 1] - 2.0 * knots_[k] + knots_[k - 1]) * static_cast<double>(K) * K;
    e += a.squaredNorm() * h + a.dot(b) * h * h + b.squaredNorm() * h * h * h / 3.0;
  }
  return e;
}

double TemporalExtension::spline_energy() const {
  const int K = this->K();
  double e = 0.0;
  for (int k = 1; k < K; ++k)
    e += (knots_[k + 1] - 2.0 * knots_[k] + knots_[k - 1]).squaredNorm();
  return e * K * K * K;  // |eta''|^2 = |D2|^2 K^4 over intervals of length 1/K
}

double TemporalExtension::discrete_path_energy() const {
  const int K = this->K();
  double e = 0.0;
  for (int k = 1; k <= K; ++k) e += (knots_[k] - knots_[k - 1]).squaredNorm();
  return e * K;
}

double TemporalExtension::discrete_spline_energy() const {
  const int K = this->K();
  double e = 0.0;
  for (int k = 1; k < K; ++k)
    e += (knots_[k] - 0.5 * (knots_[k - 1] + knots_[k + 1])).squaredNorm();
  return 4.0 * K * K * K * e;
}

}  // namespace wspline
