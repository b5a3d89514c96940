#include "torusdyn/skew.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torusdyn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Solve lift(y) = target by bisection on [lo, hi]; the lift is strictly
// increasing, so a sign change on the bracket is guaranteed by the caller.
double invert_lift(const FiberMap& f, double target, double lo, double hi,
                   double tol) {
  double flo = f.lift(lo) - target;
  double fhi = f.lift(hi) - target;
  if (flo > 1e-9 || fhi < -1e-9)
    throw std::runtime_error(
        "preimages: root bracketing failed (non-monotone fiber lift?)");
  if (flo >= 0.0) return lo;
  if (fhi <= 0.0) return hi;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double fm = f.lift(mid) - target;
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}
}  // namespace

SkewSystem::SkewSystem(int m, FiberMap fiber, double coupling)
    : m_(m), fiber_(std::move(fiber)), coupling_(coupling) {
  if (m < 1) throw std::invalid_argument("base multiplier must be positive");
}

SkewSystem SkewSystem::theoretical(int m, double epsilon, double a,
                                   double delta,
                                   std::shared_ptr<const BumpProfile> bump) {
  return SkewSystem(m, FiberMap::intermittent(epsilon, a, std::move(bump)),
                    delta * epsilon);
}

SkewSystem SkewSystem::experimental(double a, double delta, int m) {
  return SkewSystem(m, FiberMap::experimental(a), delta);
}

TorusPoint SkewSystem::eval(const TorusPoint& p) const {
  double x = mod1(m_ * p.x);
  double y = mod1(fiber_.lift(p.y) + coupling_ * std::cos(kTwoPi * p.x));
  TorusPoint out;
  out.x = x;
  out.y = y;
  return out;
}

Eigen::Matrix2d SkewSystem::jacobian(const TorusPoint& p) const {
  Eigen::Matrix2d J;
  J << static_cast<double>(m_), 0.0,
      -kTwoPi * coupling_ * std::sin(kTwoPi * p.x), fiber_.deriv(p.y);
  return J;
}

double SkewSystem::jacobian_det(const TorusPoint& p) const {
  return m_ * fiber_.deriv(p.y);
}

std::vector<TorusPoint> SkewSystem::preimages(const TorusPoint& p,
                                              double tol) const {
  if (!(tol > 0.0)) throw std::invalid_argument("preimages: tol must be > 0");

  // Branch split of the degree-2 lift: lift(y_star) = lift(0) + 1.
  const double base = fiber_.lift(0.0);
  const double y_star = invert_lift(fiber_, base + 1.0, 0.0, 1.0, tol * 1e-2);
  const double pad = 16.0 * tol;
  const double split_hi = std::min(1.0, y_star + pad);
  const double split_lo = std::max(0.0, y_star - pad);

  std::vector<TorusPoint> out;
  out.reserve(2 * m_);
  for (int k = 0; k < m_; ++k) {
    double xq = (p.x + k) / m_;
    double target = p.y - coupling_ * std::cos(kTwoPi * xq);
    // shift into [base, base + 1)
    double v = target + std::ceil(base - target);
    if (v < base) v += 1.0;
    if (v >= base + 1.0) v -= 1.0;
    double y1 = invert_lift(fiber_, v, 0.0, split_hi, tol);
    double y2 = invert_lift(fiber_, v + 1.0, split_lo, 1.0, tol);
    TorusPoint q1;
    q1.x = mod1(xq);
    q1.y = mod1(y1);
    TorusPoint q2;
    q2.x = q1.x;
    q2.y = mod1(y2);
    out.push_back(q1);
    out.push_back(q2);
  }
  return out;
}

}  // namespace torusdyn
