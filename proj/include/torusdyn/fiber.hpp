#pragma once

#include <memory>

#include "torusdyn/bump.hpp"
#include "torusdyn/torus.hpp"

namespace torusdyn {

enum class FiberKind { Doubling, Intermittent, Experimental };

// A degree-2 circle endomorphism, evaluated through an explicit lift
// satisfying lift(y+1) = lift(y) + 2.
//
//   Doubling:      y -> 2y
//   Intermittent:  y -> 2y - eps*phi(y/eps) + a*eps   (phi the bump profile)
//   Experimental:  y -> 2y - (sin 2pi y + cos 2pi y - 1)/(2pi) + a
class FiberMap {
 public:
  static FiberMap doubling();
  static FiberMap intermittent(double epsilon, double a,
                               std::shared_ptr<const BumpProfile> bump);
  static FiberMap experimental(double a);

  double lift(double y) const;   // defined on all of R
  double eval(double y) const;   // lift reduced mod 1
  double deriv(double y) const;  // derivative of the lift, > 0 everywhere

  FiberKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  double offset() const { return offset_a_; }
  const BumpProfile& bump() const { return *bump_; }

  // Same map with a different offset parameter a.
  FiberMap with_offset(double a) const;

 private:
  FiberMap() = default;
  FiberKind kind_ = FiberKind::Doubling;
  double epsilon_ = 0.0;
  double offset_a_ = 0.0;
  std::shared_ptr<const BumpProfile> bump_;
};

inline double fiber_eval(const FiberMap& f, double y) { return f.eval(y); }
inline double fiber_deriv(const FiberMap& f, double y) { return f.deriv(y); }

}  // namespace torusdyn
