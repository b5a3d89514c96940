#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace torusdyn {

// Tunable inputs of the smooth bump construction.  The derivative profile
// s(y) is a plateau at height `rise_height` ramped up over `rise_ramp`,
// ramped down through the tangency point 1/2 over `descent_len`, followed
// by a plateau at -`fall_depth` and a final ramp back to zero.  The two
// free plateau parameters are solved so that the antiderivative satisfies
// phi(1/2) = 1/2 and phi(1) = 0.
struct BumpParams {
  double scale = 1.0;       // multiplies the whole profile
  double rise_ramp = 0.03;  // width of the up-ramp starting at 1/10
  double descent_len = 0.08;
  double fall_depth = 1.25;
  double fall_ramp = 0.05;
};

// Solved shape of the derivative profile s(y).
struct BumpShape {
  double rise_height = 0.0;   // plateau value on the rise
  double descent_start = 0.0; // start of the descent through 1/2
  double fall_start = 0.0;    // start of the negative plateau
  double fall_end = 0.0;      // start of the final ramp to zero
  BumpParams params;
};

// A concrete C-infinity bump phi together with its tabulation.  phi is the
// antiderivative of the analytic profile s; values are tabulated on a
// uniform grid of [0,1] (2^16 + 1 nodes) and evaluated by cubic Hermite
// interpolation, the derivative is evaluated from the analytic formula.
class BumpProfile {
 public:
  std::array<double, 2> rise_interval{0.1, 0.5};
  std::array<double, 2> fall_interval{0.5, 1.0};
  std::vector<double> profile_params;  // flattened shape, for reports
  Eigen::ArrayXd grid_y;
  Eigen::ArrayXd phi_samples;
  Eigen::ArrayXd dphi_samples;

  double value(double y) const;  // phi(y), exact zero outside [1/10, 1]
  double deriv(double y) const;  // phi'(y), analytic

  const BumpShape& shape() const { return shape_; }

 private:
  friend BumpProfile tabulate_phi(const BumpShape& shape);
  friend BumpProfile scale_profile(const BumpProfile& bump, double factor);
  BumpShape shape_;
};

struct PhiCondition {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // slack in the binding inequality (informational)
};

// One entry per condition (i)-(iv); the profile is valid iff all pass.
std::vector<PhiCondition> validate_phi(const BumpProfile& bump, int grid_n);

inline bool all_pass(const std::vector<PhiCondition>& report) {
  for (const auto& c : report)
    if (!c.pass) return false;
  return true;
}

// Tabulate the antiderivative of the analytic profile without validating.
BumpProfile tabulate_phi(const BumpShape& shape);

// Solve the plateau parameters, tabulate, and validate.  Throws
// std::runtime_error if the tuned profile fails any of (i)-(iv).
BumpProfile build_phi(const BumpParams& params = {});

// Rescale a profile (and its derivative) by a constant factor.
BumpProfile scale_profile(const BumpProfile& bump, double factor);

// Shared default profile (built once, immutable).
std::shared_ptr<const BumpProfile> default_bump();

}  // namespace torusdyn
