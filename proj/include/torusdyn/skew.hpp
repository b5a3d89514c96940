#pragma once

#include <vector>

#include <Eigen/Core>

#include "torusdyn/fiber.hpp"
#include "torusdyn/torus.hpp"

namespace torusdyn {

// Skew product over an angle-multiplying base,
//   F(x, y) = (m x mod 1, fiber(y) + coupling * cos(2 pi x) mod 1).
// The additive fiber offset lives inside the FiberMap.
class SkewSystem {
 public:
  SkewSystem(int m, FiberMap fiber, double coupling);

  // The family F_a = (m x, f_{eps,a}(y) + delta*eps*cos 2pi x).
  static SkewSystem theoretical(int m, double epsilon, double a, double delta,
                                std::shared_ptr<const BumpProfile> bump = {});
  // The numerical-experiment family (7x, f(y) + delta*cos 2pi x + a).
  static SkewSystem experimental(double a, double delta = 1e-2, int m = 7);

  TorusPoint eval(const TorusPoint& p) const;
  Eigen::Matrix2d jacobian(const TorusPoint& p) const;
  double jacobian_det(const TorusPoint& p) const;

  // All 2m solutions of F(q) = p, to root tolerance tol on each coordinate.
  std::vector<TorusPoint> preimages(const TorusPoint& p,
                                    double tol = 1e-12) const;

  int base_multiplier() const { return m_; }
  const FiberMap& fiber() const { return fiber_; }
  double coupling() const { return coupling_; }

 private:
  int m_;
  FiberMap fiber_;
  double coupling_;
};

inline TorusPoint skew_eval(const SkewSystem& F, const TorusPoint& p) {
  return F.eval(p);
}
inline Eigen::Matrix2d skew_jacobian(const SkewSystem& F, const TorusPoint& p) {
  return F.jacobian(p);
}

}  // namespace torusdyn
