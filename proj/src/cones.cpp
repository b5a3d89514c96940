#include "torusdyn/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace torusdyn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGuard = 1e-12;
}  // namespace

double min_cone_constant(const SkewSystem& F, int grid_n) {
  if (grid_n < 1000)
    throw std::invalid_argument("min_cone_constant: grid_n must be >= 1e3");
  if (F.coupling() == 0.0) return 1e-6;

  const double m = F.base_multiplier();
  double dmax = 0.0;
  for (int i = 0; i <= grid_n; ++i)
    dmax = std::max(dmax, F.fiber().deriv(static_cast<double>(i) / grid_n));
  if (m <= 10.0 / 3.0 || m <= dmax)
    throw std::runtime_error(
        "min_cone_constant: base multiplier too small for cone invariance");

  double c0 = kTwoPi / (m - dmax) * (1.0 + 1e-3);

  // grid verification of strict invariance
  ConeParams cone{c0, F.coupling()};
  const double bound = cone.half_width();
  for (int i = 0; i < grid_n; ++i) {
    for (int jj : {0, 1}) {
      TorusPoint q;
      q.x = static_cast<double>(i) / grid_n;
      q.y = jj == 0 ? 0.25 : static_cast<double>((i * 7919) % grid_n) / grid_n;
      SlopeInterval si = image_slope_interval(F, q, cone);
      if (std::max(std::fabs(si.lo), std::fabs(si.hi)) >= bound)
        throw std::runtime_error("min_cone_constant: invariance check failed");
    }
  }
  return c0;
}

SlopeInterval image_slope_interval(const SkewSystem& F, const TorusPoint& q,
                                   const ConeParams& cone) {
  const double m = F.base_multiplier();
  double center = -kTwoPi * F.coupling() * std::sin(kTwoPi * q.x);
  double h = cone.half_width() * F.fiber().deriv(q.y);
  SlopeInterval si;
  si.lo = (center - h) / m;
  si.hi = (center + h) / m;
  return si;
}

bool transversal(const SlopeInterval& a, const SlopeInterval& b) {
  return a.hi + kGuard < b.lo || b.hi + kGuard < a.lo;
}

TransversalityReport transversality_report(const SkewSystem& F,
                                           const ConeParams& cone,
                                           int grid_n) {
  if (grid_n < 64)
    throw std::invalid_argument(
        "transversality_report: grid_n must be >= 64 per axis");

  int max_count = 0;
  std::vector<SlopeInterval> intervals;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      TorusPoint p;
      p.x = (i + 0.5) / grid_n;
      p.y = (j + 0.5) / grid_n;
      auto pre = F.preimages(p);
      intervals.clear();
      intervals.reserve(pre.size());
      for (const auto& q : pre)
        intervals.push_back(image_slope_interval(F, q, cone));
      for (std::size_t a = 0; a < intervals.size(); ++a) {
        int count = 0;
        for (std::size_t b = 0; b < intervals.size(); ++b)
          if (b != a && transversal(intervals[a], intervals[b])) ++count;
        max_count = std::max(max_count, count);
      }
    }
  }

  const double m = F.base_multiplier();
  double dmin = 1e300;
  for (int i = 0; i <= 100000; ++i)
    dmin = std::min(dmin, F.fiber().deriv(i / 100000.0));

  TransversalityReport rep;
  rep.max_count = max_count;
  rep.normalized = max_count / ((2.0 / 3.0) * m);
  rep.det_floor_normalized = max_count / (m * dmin);
  return rep;
}

double transversality_measure(const SkewSystem& F, const ConeParams& cone,
                              int grid_n) {
  return transversality_report(F, cone, grid_n).normalized;
}

}  // namespace torusdyn
