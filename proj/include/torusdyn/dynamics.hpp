#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "torusdyn/rng.hpp"
#include "torusdyn/skew.hpp"

namespace torusdyn {

// Orbit protocol: p0 either explicit or drawn uniformly from the seed,
// indices [burn_in, burn_in + length) are observed.
struct OrbitSpec {
  std::optional<TorusPoint> initial;
  long burn_in = 1000;
  long length = 1000000;
  std::uint64_t seed = 1;
};

struct LyapunovEstimate {
  double chi_c = 0.0;  // nats per iterate, vertical direction
  double chi_u = 0.0;  // log m, exact from the triangular Jacobian
  long n_used = 0;
  TorusPoint initial_used;
};

struct DensityRaster {
  int nx = 0, ny = 0;
  std::vector<std::int64_t> counts;  // index ix + nx*iy
  std::int64_t total = 0;

  std::int64_t at(int ix, int iy) const { return counts[ix + std::size_t(nx) * iy]; }
};

enum class Stability { Repelling, Attracting, Neutral };

struct FixedPoint {
  double location = 0.0;
  double derivative = 0.0;
  Stability stability = Stability::Repelling;
};

struct FiberFixedPoints {
  std::vector<FixedPoint> points;  // sorted by location
};

struct TrappingReport {
  bool holds = false;
  double worst_margin = 0.0;
};

struct ExpansionReport {
  bool certified = false;
  int worst_n = 0;  // largest n needed over the grid (when certified)
};

inline TorusPoint resolve_initial(const OrbitSpec& spec) {
  if (spec.initial) return *spec.initial;
  SplitMix64 gen(spec.seed);
  double x = gen.next_double();
  double y = gen.next_double();
  return TorusPoint(x, y);
}

// Stream the orbit points with indices in [burn_in, burn_in + length).
template <class Fn>
void iterate(const SkewSystem& F, const OrbitSpec& spec, Fn&& fn) {
  TorusPoint p = resolve_initial(spec);
  for (long k = 0; k < spec.burn_in; ++k) p = F.eval(p);
  for (long k = 0; k < spec.length; ++k) {
    fn(p);
    p = F.eval(p);
  }
}

std::vector<TorusPoint> orbit_points(const SkewSystem& F, const OrbitSpec& spec);

LyapunovEstimate central_lyapunov(const SkewSystem& F, const OrbitSpec& spec);

DensityRaster orbit_raster(const SkewSystem& F, const OrbitSpec& spec, int nx,
                           int ny);

FiberFixedPoints fiber_fixed_points(const FiberMap& f);

// Verifies F_a(W) strictly inside W for W = T x ((delta-a)eps, eps/2).
// Rejects a + delta > 0 (trapping is asserted only in that regime).
TrappingReport check_trapping(const SkewSystem& F, double epsilon, double a,
                              double delta, int grid_n);

// For each of grid_n cells of T, searches the least n <= n_max with a
// certified lower bound (f^n)' > 1 on the whole cell.
ExpansionReport uniform_expansion_certificate(const FiberMap& f, int n_max,
                                              int grid_n);

}  // namespace torusdyn
