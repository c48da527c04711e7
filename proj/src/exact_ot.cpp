#include "wspline/exact_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace wspline {

WeightedPoints::WeightedPoints(Eigen::MatrixXd pts, Eigen::VectorXd w)
    : points(std::move(pts)), weights(std::move(w)) {
  if (points.rows() != weights.size())
    throw ConfigError("WeightedPoints: point/weight count mismatch");
  if ((weights.array() < 0.0).any())
    throw NegativeMassError("WeightedPoints: negative weight");
  const double total = weights.sum();
  if (!(total > 0.0)) throw AllZeroError("WeightedPoints: zero total mass");
  weights /= total;
}

namespace {

Eigen::MatrixXd cost_matrix(const WeightedPoints& mu, const WeightedPoints& nu) {
  Eigen::MatrixXd c(mu.size(), nu.size());
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j)
      c(i, j) = (mu.points.row(i) - nu.points.row(j)).squaredNorm();
  return c;
}

}  // namespace

ExactOtResult wasserstein2_exact_small(const WeightedPoints& mu, const WeightedPoints& nu) {
  const int n = mu.size(), m = nu.size();
  if (n + m > 64)
    throw TooLargeError("wasserstein2_exact_small: combined support exceeds 64 atoms");
  if (mu.dim() != nu.dim())
    throw ConfigError("wasserstein2_exact_small: dimension mismatch");

  const Eigen::MatrixXd c = cost_matrix(mu, nu);
  Eigen::VectorXd supply = mu.weights;
  Eigen::VectorXd demand = nu.weights;
  Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);  // source potentials
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m);  // sink potentials

  const double inf = std::numeric_limits<double>::infinity();
  const double mass_eps = 1e-15;

  // Successive shortest augmenting paths on the dense bipartite residual
  // graph, with potentials keeping reduced costs nonnegative so plain
  // Dijkstra applies. Nodes 0..n-1 are sources, n..n+m-1 sinks.
  const int nodes = n + m;
  const int max_aug = 16 * nodes * nodes;
  int aug = 0;
  while (true) {
    double left = 0.0;
    for (int i = 0; i < n; ++i) left += supply[i];
    if (left <= mass_eps) break;
    if (++aug > max_aug)
      throw Error("wasserstein2_exact_small: augmentation cap exceeded");

    std::vector<double> dist(nodes, inf);
    std::vector<int> prev(nodes, -1);
    std::vector<char> done(nodes, 0);
    for (int i = 0; i < n; ++i)
      if (supply[i] > mass_eps) dist[i] = 0.0;

    int sink = -1;
    while (true) {
      int best = -1;
      double bd = inf;
      for (int k = 0; k < nodes; ++k)
        if (!done[k] && dist[k] < bd) { bd = dist[k]; best = k; }
      if (best < 0) break;
      done[best] = 1;
      if (best >= n && demand[best - n] > mass_eps) { sink = best; break; }
      if (best < n) {
        const int i = best;
        for (int j = 0; j < m; ++j) {
          const double rc = c(i, j) - u[i] - v[j];
          if (dist[i] + rc < dist[n + j] - 1e-18) {
            dist[n + j] = dist[i] + rc;
            prev[n + j] = i;
          }
        }
      } else {
        const int j = best - n;
        for (int i = 0; i < n; ++i)
          if (plan(i, j) > mass_eps) {
            const double rc = -(c(i, j) - u[i] - v[j]);
            if (dist[n + j] + rc < dist[i] - 1e-18) {
              dist[i] = dist[n + j] + rc;
              prev[i] = n + j;
            }
          }
      }
    }
    if (sink < 0) throw Error("wasserstein2_exact_small: no augmenting path");

    // update potentials
    for (int i = 0; i < n; ++i)
      if (dist[i] < inf) u[i] += dist[sink] - dist[i];
    for (int j = 0; j < m; ++j)
      if (dist[n + j] < inf) v[j] += dist[sink] - dist[n + j];

    // bottleneck along the path
    double bottleneck = demand[sink - n];
    for (int k = sink; prev[k] != -1; k = prev[k]) {
      const int p = prev[k];
      if (p >= n && k < n) bottleneck = std::min(bottleneck, plan(k, p - n));
    }
    {
      int k = sink;
      while (prev[k] != -1) k = prev[k];
      bottleneck = std::min(bottleneck, supply[k]);
    }

    // apply augmentation
    for (int k = sink; prev[k] != -1; k = prev[k]) {
      const int p = prev[k];
      if (p < n && k >= n) plan(p, k - n) += bottleneck;
      else plan(k, p - n) -= bottleneck;
    }
    {
      int k = sink;
      while (prev[k] != -1) k = prev[k];
      supply[k] -= bottleneck;
    }
    demand[sink - n] -= bottleneck;
  }

  // Optimality certificate: dual feasibility and complementary slackness.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double rc = c(i, j) - u[i] - v[j];
      if (rc < -1e-8) throw Error("wasserstein2_exact_small: dual infeasible");
      if (plan(i, j) > 1e-12 && std::abs(rc) > 1e-8)
        throw Error("wasserstein2_exact_small: slackness violated");
    }

  ExactOtResult res;
  res.cost = (plan.array() * c.array()).sum();
  res.coupling.plan = std::move(plan);
  return res;
}

namespace {

struct SortedAtoms {
  std::vector<double> x;
  std::vector<double> w;
};

SortedAtoms sort_atoms(const WeightedPoints& p) {
  std::vector<int> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&p](int a, int b) { return p.points(a, 0) < p.points(b, 0); });
  SortedAtoms s;
  for (int i : idx) {
    s.x.push_back(p.points(i, 0));
    s.w.push_back(p.weights[i]);
  }
  return s;
}

}  // namespace

double wasserstein2_1d(const WeightedPoints& mu, const WeightedPoints& nu) {
  if (mu.dim() != 1 || nu.dim() != 1)
    throw ConfigError("wasserstein2_1d: measures must be 1D");
  const SortedAtoms a = sort_atoms(mu), b = sort_atoms(nu);
  double cost = 0.0;
  size_t i = 0, j = 0;
  double ra = a.w[0], rb = b.w[0];
  while (i < a.x.size() && j < b.x.size()) {
    const double chunk = std::min(ra, rb);
    const double d = a.x[i] - b.x[j];
    cost += chunk * d * d;
    ra -= chunk;
    rb -= chunk;
    if (ra <= 1e-15 && i + 1 < a.x.size()) ra = a.w[++i];
    else if (ra <= 1e-15) ++i;
    if (rb <= 1e-15 && j + 1 < b.x.size()) rb = b.w[++j];
    else if (rb <= 1e-15) ++j;
  }
  return cost;
}

Eigen::VectorXd monge_map_1d(const WeightedPoints& mu, const WeightedPoints& nu) {
  if (mu.dim() != 1 || nu.dim() != 1)
    throw ConfigError("monge_map_1d: measures must be 1D");
  const SortedAtoms a = sort_atoms(mu), b = sort_atoms(nu);
  for (size_t i = 1; i < a.x.size(); ++i)
    if (a.x[i] == a.x[i - 1]) throw ConfigError("monge_map_1d: mu atoms must be distinct");

  // cumulative nu quantile lookup
  std::vector<double> cdf(b.w.size());
  std::partial_sum(b.w.begin(), b.w.end(), cdf.begin());
  auto quantile = [&](double q) {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), q - 1e-15);
    const size_t j = std::min(static_cast<size_t>(it - cdf.begin()), b.x.size() - 1);
    return b.x[j];
  };

  // map each mu atom at the midpoint of its quantile interval
  Eigen::VectorXd t(mu.size());
  double acc = 0.0;
  std::vector<double> mapped(a.x.size());
  for (size_t i = 0; i < a.x.size(); ++i) {
    mapped[i] = quantile(acc + 0.5 * a.w[i]);
    acc += a.w[i];
  }
  // report in the original atom order of mu
  for (int k = 0; k < mu.size(); ++k) {
    const auto it = std::lower_bound(a.x.begin(), a.x.end(), mu.points(k, 0));
    t[k] = mapped[static_cast<size_t>(it - a.x.begin())];
  }
  return t;
}

}  // namespace wspline
