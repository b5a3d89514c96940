#pragma once

#include "torusdyn/skew.hpp"

namespace torusdyn {

// Constant horizontal cone |v_y| <= c0 * coupling * |v_x| in slope
// coordinates sigma = v_y / v_x.
struct ConeParams {
  double c0 = 0.0;
  double coupling = 0.0;

  double half_width() const { return c0 * coupling; }
};

struct SlopeInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// Smallest invariant cone constant: closed-form worst case from the
// triangular Jacobian, refined by the grid-measured derivative range,
// with relative margin 1e-3.  Returns the floor 1e-6 at zero coupling.
// Throws if the base multiplier cannot dominate the fiber derivative.
double min_cone_constant(const SkewSystem& F, int grid_n);

// Exact image of the cone slope interval under DF at q.
SlopeInterval image_slope_interval(const SkewSystem& F, const TorusPoint& q,
                                   const ConeParams& cone);

// Open-interval disjointness with a guard band against float ties.
bool transversal(const SlopeInterval& a, const SlopeInterval& b);

struct TransversalityReport {
  double normalized = 0.0;  // max count / ((2/3) m)
  double det_floor_normalized = 0.0;  // max count / (m * measured min f')
  int max_count = 0;
};

TransversalityReport transversality_report(const SkewSystem& F,
                                           const ConeParams& cone, int grid_n);

// The quantity m(F): worst-case transversal branch count over a p-grid,
// normalized by the determinant floor (2/3) m.
double transversality_measure(const SkewSystem& F, const ConeParams& cone,
                              int grid_n);

}  // namespace torusdyn
