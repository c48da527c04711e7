#include "wspline/cubic_spline.hpp"

#include <algorithm>
#include <cmath>

namespace wspline {

namespace {

// Thomas solve for a tridiagonal system; diag/rhs are overwritten.
std::vector<double> solve_tridiag(std::vector<double> lower, std::vector<double> diag,
                                  std::vector<double> upper, std::vector<double> rhs) {
  const size_t n = diag.size();
  for (size_t i = 1; i < n; ++i) {
    if (std::abs(diag[i - 1]) < 1e-300) throw SingularSystemError("tridiagonal pivot underflow");
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (std::abs(diag[n - 1]) < 1e-300) throw SingularSystemError("tridiagonal pivot underflow");
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> t, std::vector<double> y, SplineBc bc,
                         double slope_begin, double slope_end)
    : t_(std::move(t)), y_(std::move(y)), bc_(bc) {
  const size_t n = t_.size();
  if (n < 2 || y_.size() != n) throw ConfigError("CubicSpline: need >= 2 matching knots");
  for (size_t i = 1; i < n; ++i)
    if (!(t_[i] > t_[i - 1])) throw ConfigError("CubicSpline: knots must strictly increase");
  if (bc_ == SplineBc::Periodic && std::abs(y_.front() - y_.back()) > 1e-12)
    throw ConfigError("CubicSpline: periodic spline needs equal end values");

  const size_t seg = n - 1;
  std::vector<double> h(seg);
  for (size_t i = 0; i < seg; ++i) h[i] = t_[i + 1] - t_[i];

  m_.assign(n, 0.0);
  if (bc_ == SplineBc::Natural) {
    if (n > 2) {
      const size_t u = n - 2;  // interior unknowns
      std::vector<double> lo(u, 0.0), di(u), up(u, 0.0), rhs(u);
      for (size_t i = 0; i < u; ++i) {
        di[i] = (h[i] + h[i + 1]) / 3.0;
        if (i) lo[i] = h[i] / 6.0;
        if (i + 1 < u) up[i] = h[i + 1] / 6.0;
        rhs[i] = (y_[i + 2] - y_[i + 1]) / h[i + 1] - (y_[i + 1] - y_[i]) / h[i];
      }
      const auto x = solve_tridiag(lo, di, up, rhs);
      for (size_t i = 0; i < u; ++i) m_[i + 1] = x[i];
    }
  } else if (bc_ == SplineBc::Clamped) {
    std::vector<double> lo(n, 0.0), di(n), up(n, 0.0), rhs(n);
    di[0] = h[0] / 3.0;
    up[0] = h[0] / 6.0;
    rhs[0] = (y_[1] - y_[0]) / h[0] - slope_begin;
    for (size_t i = 1; i + 1 < n; ++i) {
      lo[i] = h[i - 1] / 6.0;
      di[i] = (h[i - 1] + h[i]) / 3.0;
      up[i] = h[i] / 6.0;
      rhs[i] = (y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1];
    }
    lo[n - 1] = h[seg - 1] / 6.0;
    di[n - 1] = h[seg - 1] / 3.0;
    rhs[n - 1] = slope_end - (y_[n - 1] - y_[n - 2]) / h[seg - 1];
    m_ = solve_tridiag(lo, di, up, rhs);
  } else {  // Periodic
    if (n == 2) {
      // single closed segment: the periodic interpolant of equal end values
      // is the constant
      m_[0] = m_[1] = 0.0;
    } else {
      // cyclic tridiagonal in M_0..M_{n-2}, closed via Sherman-Morrison
      const size_t u = n - 1;
      auto hp = [&](size_t i) { return h[(i + u - 1) % u]; };  // h before knot i
      std::vector<double> lo(u, 0.0), di(u), up(u, 0.0), rhs(u);
      std::vector<double> corner_first(u, 0.0), corner_last(u, 0.0);
      for (size_t i = 0; i < u; ++i) {
        di[i] = (hp(i) + h[i]) / 3.0;
        const double before = hp(i) / 6.0, after = h[i] / 6.0;
        if (i) lo[i] = before;
        else corner_first[u - 1] = before;  // coupling M_0 <- M_{u-1}
        if (i + 1 < u) up[i] = after;
        else corner_last[0] = after;  // coupling M_{u-1} <- M_0
        const double yp = y_[i == 0 ? u : i] - y_[i == 0 ? u - 1 : i - 1];
        rhs[i] = (y_[i + 1] - y_[i]) / h[i] - yp / hp(i);
      }
      // A + e_0 w^T form with w carrying the two corner entries
      const double gamma = -di[0];
      std::vector<double> d2 = di;
      d2[0] -= gamma;
      d2[u - 1] -= corner_first[u - 1] * corner_last[0] / gamma;
      auto q = solve_tridiag(lo, d2, up, rhs);
      std::vector<double> zr(u, 0.0);
      zr[0] = gamma;
      zr[u - 1] = corner_last[0];
      auto z = solve_tridiag(lo, d2, up, zr);
      const double fact = (q[0] + corner_first[u - 1] * q[u - 1] / gamma) /
                          (1.0 + z[0] + corner_first[u - 1] * z[u - 1] / gamma);
      for (size_t i = 0; i < u; ++i) m_[i] = q[i] - fact * z[i];
      m_[n - 1] = m_[0];
    }
  }
}

int CubicSpline::piece(double t) const {
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  int i = static_cast<int>(it - t_.begin()) - 1;
  i = std::clamp(i, 0, static_cast<int>(t_.size()) - 2);
  return i;
}

double CubicSpline::operator()(double t) const {
  const int i = piece(t);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h, b = (t - t_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double t) const {
  const int i = piece(t);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h, b = (t - t_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

double CubicSpline::deriv2(double t) const {
  const int i = piece(t);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h, b = (t - t_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

double CubicSpline::accel_energy() const {
  // the second derivative is linear per piece, so each piece contributes
  // h/3 (M_i^2 + M_i M_{i+1} + M_{i+1}^2)
  double e = 0.0;
  for (size_t i = 0; i + 1 < t_.size(); ++i) {
    const double h = t_[i + 1] - t_[i];
    e += h / 3.0 * (m_[i] * m_[i] + m_[i] * m_[i + 1] + m_[i + 1] * m_[i + 1]);
  }
  return e;
}

}  // namespace wspline
