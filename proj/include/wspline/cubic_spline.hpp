#pragma once

#include <vector>

#include "wspline/errors.hpp"

namespace wspline {

enum class SplineBc { Natural, Clamped, Periodic };

/// Interpolating cubic spline through (t_i, y_i) with strictly increasing
/// knots. Natural ends are free, clamped ends take prescribed slopes, and
/// periodic requires y_front == y_back and closes the second-derivative
/// system cyclically. With two knots the natural spline is the straight line.
class CubicSpline {
public:
  CubicSpline(std::vector<double> t, std::vector<double> y,
              SplineBc bc = SplineBc::Natural,
              double slope_begin = 0.0, double slope_end = 0.0);

  double operator()(double t) const;
  double deriv(double t) const;
  double deriv2(double t) const;

  /// Exact integral of the squared second derivative over the knot span.
  double accel_energy() const;

  const std::vector<double>& knots() const { return t_; }
  const std::vector<double>& values() const { return y_; }
  SplineBc bc() const { return bc_; }

private:
  int piece(double t) const;

  std::vector<double> t_, y_;
  std::vector<double> m_;  // second derivatives at knots
  SplineBc bc_ = SplineBc::Natural;
};

}  // namespace wspline
