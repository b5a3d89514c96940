#include "torusdyn/bump.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace torusdyn {
namespace {

constexpr int kTabNodes = 1 << 16;  // tabulation panels over [0,1]
constexpr double kSlopeCap = 4.0 / 3.0;

// C-infinity step: 0 for t<=0, 1 for t>=1, strictly increasing between.
double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double smoothstep_inv(double v) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (smoothstep(mid) < v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// The analytic derivative profile s(y).
double profile(const BumpShape& sh, double y) {
  const BumpParams& p = sh.params;
  const double r0 = 0.1;
  const double r1 = r0 + p.rise_ramp;
  const double d0 = sh.descent_start;
  const double d1 = d0 + p.descent_len;
  const double f1 = sh.fall_end;
  const double f2 = f1 + p.fall_ramp;
  const double depth = -p.fall_depth;

  double v;
  if (y <= r0 || y >= f2) {
    v = 0.0;
  } else if (y < r1) {
    v = sh.rise_height * smoothstep((y - r0) / p.rise_ramp);
  } else if (y < d0) {
    v = sh.rise_height;
  } else if (y < d1) {
    v = sh.rise_height +
        (depth - sh.rise_height) * smoothstep((y - d0) / p.descent_len);
  } else if (y < f1) {
    v = depth;
  } else {
    v = depth * (1.0 - smoothstep((y - f1) / p.fall_ramp));
  }
  return p.scale * v;
}

// Simpson sum of s over tabulation panels [i0/N, i1/N].  Matches the
// cumulative quadrature used by tabulate_phi node for node.
double integrate_nodes(const BumpShape& sh, int i0, int i1) {
  const double h = 1.0 / kTabNodes;
  double acc = 0.0, carry = 0.0;
  double left = profile(sh, i0 * h);
  for (int i = i0; i < i1; ++i) {
    double mid = profile(sh, (i + 0.5) * h);
    double right = profile(sh, (i + 1) * h);
    double term = (h / 6.0) * (left + 4.0 * mid + right);
    double yk = term - carry;
    double t = acc + yk;
    carry = (t - acc) - yk;
    acc = t;
    left = right;
  }
  return acc;
}

// Fix descent_start so that s(1/2) = 1 for the given plateau height.
void place_descent(BumpShape& sh) {
  double frac = (sh.rise_height - 1.0) / (sh.rise_height + sh.params.fall_depth);
  double u = smoothstep_inv(frac);
  sh.descent_start = 0.5 - u * sh.params.descent_len;
}

// Solve the rise plateau height so that phi(1/2) = 1/2.
void solve_rise(BumpShape& sh) {
  const int half = kTabNodes / 2;
  // provisional fall placement so the profile is not clipped on [0, 1/2]
  sh.fall_end = 1.0 - sh.params.fall_ramp;
  sh.fall_start = sh.fall_end;
  auto objective = [&](double height) {
    sh.rise_height = height;
    place_descent(sh);
    return integrate_nodes(sh, 0, half) - 0.5;
  };
  const double cap = kSlopeCap - 2e-3;
  double lo = 1.05, hi = cap;
  double flo = objective(lo);
  if (flo > 0.0 || objective(hi) < 0.0)
    throw std::runtime_error("bump construction: rise plateau infeasible");
  double fhi = 0.0;
  // scan for the bracketing step, then bisect
  const int scan = 32;
  for (int i = 1; i <= scan; ++i) {
    double x = lo + (cap - lo) * i / scan;
    double fx = objective(x);
    if (fx >= 0.0) {
      hi = x;
      fhi = fx;
      break;
    }
    lo = x;
    flo = fx;
  }
  for (int it = 0; it < 64 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = objective(mid);
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  // keep the endpoint with the smaller residual
  objective(std::fabs(flo) < std::fabs(fhi) ? lo : hi);
}

// Solve the end of the negative plateau so that phi(1) = 0.
void solve_fall(BumpShape& sh) {
  const int half = kTabNodes / 2;
  sh.fall_start = sh.descent_start + sh.params.descent_len;
  auto objective = [&](double fall_end) {
    sh.fall_end = fall_end;
    return integrate_nodes(sh, half, kTabNodes) + 0.5;
  };
  double lo = sh.fall_start + 1e-4;
  double hi = 1.0 - sh.params.fall_ramp - 1e-4;
  if (objective(lo) < 0.0 || objective(hi) > 0.0)
    throw std::runtime_error("bump construction: fall plateau infeasible");
  for (int it = 0; it < 64 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    (objective(mid) >= 0.0 ? lo : hi) = mid;
  }
  // objective(lo) >= 0 keeps phi(1) nonnegative
  objective(lo);
}

}  // namespace

BumpProfile tabulate_phi(const BumpShape& shape) {
  BumpProfile bump;
  bump.shape_ = shape;
  const int n = kTabNodes;
  const double h = 1.0 / n;
  bump.grid_y.resize(n + 1);
  bump.phi_samples.resize(n + 1);
  bump.dphi_samples.resize(n + 1);

  double acc = 0.0, carry = 0.0;
  double left = profile(shape, 0.0);
  bump.grid_y[0] = 0.0;
  bump.phi_samples[0] = 0.0;
  bump.dphi_samples[0] = left;
  for (int i = 0; i < n; ++i) {
    double mid = profile(shape, (i + 0.5) * h);
    double right = profile(shape, (i + 1) * h);
    double term = (h / 6.0) * (left + 4.0 * mid + right);
    double yk = term - carry;
    double t = acc + yk;
    carry = (t - acc) - yk;
    acc = t;
    left = right;
    bump.grid_y[i + 1] = (i + 1) * h;
    bump.phi_samples[i + 1] = acc;
    bump.dphi_samples[i + 1] = right;
  }

  bump.profile_params = {shape.rise_height,      shape.descent_start,
                         shape.fall_start,       shape.fall_end,
                         shape.params.scale,     shape.params.rise_ramp,
                         shape.params.descent_len, shape.params.fall_depth,
                         shape.params.fall_ramp};
  return bump;
}

double BumpProfile::value(double y) const {
  if (y <= 0.1 || y >= 1.0) return 0.0;
  const int n = kTabNodes;
  double u = y * n;
  int i = static_cast<int>(u);
  if (i >= n) i = n - 1;
  double t = u - i;
  const double h = 1.0 / n;
  double p0 = phi_samples[i], p1 = phi_samples[i + 1];
  double d0 = h * dphi_samples[i], d1 = h * dphi_samples[i + 1];
  double t2 = t * t, t3 = t2 * t;
  double v = p0 * (2 * t3 - 3 * t2 + 1) + d0 * (t3 - 2 * t2 + t) +
             p1 * (-2 * t3 + 3 * t2) + d1 * (t3 - t2);
  // the true antiderivative is nonnegative; clip interpolation noise
  return v < 0.0 ? 0.0 : v;
}

double BumpProfile::deriv(double y) const { return profile(shape_, y); }

std::vector<PhiCondition> validate_phi(const BumpProfile& bump, int grid_n) {
  if (grid_n < 1000)
    throw std::invalid_argument("validate_phi: grid_n must be >= 1000");

  double min_phi = 0.0, max_phi = 0.0, max_abs_d = 0.0;
  double worst_outside = 0.0;
  double min_below_diag = 1e300;
  for (int i = 0; i <= grid_n; ++i) {
    double y = static_cast<double>(i) / grid_n;
    double v = bump.value(y);
    double d = std::fabs(bump.deriv(y));
    min_phi = std::min(min_phi, v);
    max_phi = std::max(max_phi, v);
    max_abs_d = std::max(max_abs_d, d);
    if (y < 0.1) worst_outside = std::max(worst_outside, std::fabs(v));
    if (i > 0 && i < grid_n && 2 * i != grid_n)
      min_below_diag = std::min(min_below_diag, y - v);
  }
  for (double y : {-0.5, -0.01, 1.0 + 1e-9, 1.5})
    worst_outside = std::max(worst_outside, std::fabs(bump.value(y)));

  std::vector<PhiCondition> report(4);
  report[0].name = "(i) 0<=phi<=1 and |phi'|<=4/3";
  report[0].margin = std::min(kSlopeCap - max_abs_d, 1.0 - max_phi);
  report[0].pass = min_phi >= 0.0 && max_phi <= 1.0 && max_abs_d <= kSlopeCap;

  report[1].name = "(ii) phi = 0 outside [1/10 .. 1]";
  report[1].margin = -worst_outside;
  report[1].pass = worst_outside == 0.0;

  const double step = 1e-4;
  double at_half = bump.value(0.5);
  double d_at_half = bump.deriv(0.5);
  double second_diff =
      bump.value(0.5 + step) - 2.0 * at_half + bump.value(0.5 - step);
  double e_val = std::fabs(at_half - 0.5);
  double e_der = std::fabs(d_at_half - 1.0);
  report[2].name = "(iii) phi(1/2)=1/2 and phi'(1/2)=1 and phi''(1/2)<0";
  report[2].margin = std::min({1e-10 - e_val, 1e-10 - e_der, -second_diff});
  report[2].pass = e_val <= 1e-10 && e_der <= 1e-10 && second_diff < 0.0;

  report[3].name = "(iv) phi(y) < y on (0 .. 1) off 1/2";
  report[3].margin = min_below_diag;
  report[3].pass = min_below_diag > 0.0;
  return report;
}

BumpProfile build_phi(const BumpParams& params) {
  BumpShape shape;
  shape.params = params;
  shape.params.scale = 1.0;  // solve the unit-scale shape
  solve_rise(shape);
  solve_fall(shape);
  shape.params.scale = params.scale;

  BumpProfile bump = tabulate_phi(shape);
  auto report = validate_phi(bump, 100000);
  if (!all_pass(report)) {
    std::ostringstream msg;
    msg << "build_phi: constructed profile fails";
    for (const auto& c : report)
      if (!c.pass) msg << " " << c.name;
    throw std::runtime_error(msg.str());
  }
  return bump;
}

BumpProfile scale_profile(const BumpProfile& bump, double factor) {
  BumpProfile out = bump;
  out.phi_samples *= factor;
  out.dphi_samples *= factor;
  out.shape_.params.scale *= factor;
  if (!out.profile_params.empty()) out.profile_params[4] = out.shape_.params.scale;
  return out;
}

std::shared_ptr<const BumpProfile> default_bump() {
  static std::shared_ptr<const BumpProfile> instance =
      std::make_shared<const BumpProfile>(build_phi());
  return instance;
}

}  // namespace torusdyn
