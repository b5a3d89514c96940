#pragma once

#include <cmath>

namespace torusdyn {

// Reduce a real number to [0, 1).
inline double mod1(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r -= 1.0;
  if (r < 0.0) r = 0.0;
  return r;
}

// Circular distance on T = R/Z.
inline double circle_dist(double a, double b) {
  double d = std::fabs(mod1(a) - mod1(b));
  return d > 0.5 ? 1.0 - d : d;
}

// A point on the 2-torus, coordinates reduced mod 1 on construction.
struct TorusPoint {
  double x = 0.0;
  double y = 0.0;

  TorusPoint() = default;
  TorusPoint(double x_, double y_) : x(mod1(x_)), y(mod1(y_)) {}
};

inline double torus_dist(const TorusPoint& a, const TorusPoint& b) {
  double dx = circle_dist(a.x, b.x);
  double dy = circle_dist(a.y, b.y);
  return std::sqrt(dx * dx + dy * dy);
}

// Compensated accumulator for long Birkhoff sums.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace torusdyn
