#include "torusdyn/fiber.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torusdyn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FiberMap FiberMap::doubling() {
  FiberMap f;
  f.kind_ = FiberKind::Doubling;
  return f;
}

FiberMap FiberMap::intermittent(double epsilon, double a,
                                std::shared_ptr<const BumpProfile> bump) {
  if (!(epsilon > 0.0 && epsilon <= 0.01))
    throw std::invalid_argument("intermittent fiber requires 0 < eps <= 1/100");
  if (!bump) bump = default_bump();
  FiberMap f;
  f.kind_ = FiberKind::Intermittent;
  f.epsilon_ = epsilon;
  f.offset_a_ = a;
  f.bump_ = std::move(bump);
  return f;
}

FiberMap FiberMap::experimental(double a) {
  FiberMap f;
  f.kind_ = FiberKind::Experimental;
  f.offset_a_ = a;
  return f;
}

FiberMap FiberMap::with_offset(double a) const {
  FiberMap f = *this;
  if (f.kind_ == FiberKind::Doubling)
    throw std::invalid_argument("doubling fiber has no offset parameter");
  f.offset_a_ = a;
  return f;
}

double FiberMap::lift(double y) const {
  switch (kind_) {
    case FiberKind::Doubling:
      return 2.0 * y;
    case FiberKind::Intermittent: {
      double n = std::floor(y);
      double t = y - n;
      double v = 2.0 * y + offset_a_ * epsilon_;
      if (t <= epsilon_) v -= epsilon_ * bump_->value(t / epsilon_);
      return v;
    }
    case FiberKind::Experimental:
      return 2.0 * y -
             (std::sin(kTwoPi * y) + std::cos(kTwoPi * y) - 1.0) / kTwoPi +
             offset_a_;
  }
  return 0.0;
}

double FiberMap::eval(double y) const { return mod1(lift(y)); }

double FiberMap::deriv(double y) const {
  switch (kind_) {
    case FiberKind::Doubling:
      return 2.0;
    case FiberKind::Intermittent: {
      double t = y - std::floor(y);
      if (t <= epsilon_) return 2.0 - bump_->deriv(t / epsilon_);
      return 2.0;
    }
    case FiberKind::Experimental:
      return 2.0 - std::cos(kTwoPi * y) + std::sin(kTwoPi * y);
  }
  return 0.0;
}

}  // namespace torusdyn
