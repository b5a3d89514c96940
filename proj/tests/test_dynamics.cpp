#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "torusdyn/dynamics.hpp"

using namespace torusdyn;

TEST_CASE("iterate: fixed point stays put") {
  SkewSystem F = SkewSystem::experimental(-0.01);
  OrbitSpec spec;
  spec.initial = TorusPoint(0.0, 0.0);
  spec.burn_in = 0;
  spec.length = 5;
  auto pts = orbit_points(F, spec);
  REQUIRE(pts.size() == 5);
  for (const auto& p : pts) {
    CHECK(std::min(p.x, 1.0 - p.x) <= 1e-12);
    CHECK(std::min(p.y, 1.0 - p.y) <= 1e-12);
  }
}

TEST_CASE("iterate: dyadic base orbit") {
  SkewSystem F(7, FiberMap::doubling(), 0.0);
  OrbitSpec spec;
  spec.initial = TorusPoint(1.0 / 8.0, 1.0 / 3.0);
  spec.burn_in = 1;
  spec.length = 3;
  auto pts = orbit_points(F, spec);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].x == doctest::Approx(7.0 / 8.0).epsilon(1e-14));
  CHECK(pts[1].x == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
  CHECK(pts[2].x == doctest::Approx(7.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("iterate and central_lyapunov are deterministic in the seed") {
  SkewSystem F = SkewSystem::experimental(0.004);
  OrbitSpec spec;
  spec.length = 20000;
  spec.seed = 42;
  auto a = central_lyapunov(F, spec);
  auto b = central_lyapunov(F, spec);
  CHECK(a.chi_c == b.chi_c);
  CHECK(a.initial_used.x == b.initial_used.x);
  CHECK(a.initial_used.y == b.initial_used.y);

  spec.seed = 43;
  auto c = central_lyapunov(F, spec);
  CHECK(a.chi_c != c.chi_c);  // different seed, different orbit
}

TEST_CASE("chi_c exact for constant-derivative fiber; chi_u = log m") {
  SkewSystem F(7, FiberMap::doubling(), 0.0);
  OrbitSpec spec;
  spec.length = 5000;
  auto est = central_lyapunov(F, spec);
  CHECK(est.chi_c == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(est.chi_u == std::log(7.0));
  CHECK(est.n_used == 5000);
}

TEST_CASE("central_lyapunov rejects short orbits") {
  OrbitSpec spec;
  spec.length = 100;
  CHECK_THROWS_AS(
      central_lyapunov(SkewSystem::experimental(0.0), spec),
      std::invalid_argument);
}

TEST_CASE("experimental sweep endpoints have the advertised signs") {
  OrbitSpec spec;
  spec.length = 1000000;
  auto lo = central_lyapunov(SkewSystem::experimental(-0.02), spec);
  auto hi = central_lyapunov(SkewSystem::experimental(0.02), spec);
  CHECK(lo.chi_c < -1e-3);
  CHECK(hi.chi_c > 1e-3);
  CHECK(lo.chi_c < lo.chi_u);
  CHECK(hi.chi_c < hi.chi_u);
}

TEST_CASE("orbit_raster: counts sum to length; fixed point occupies one cell") {
  SkewSystem F = SkewSystem::experimental(-0.01);
  OrbitSpec spec;
  spec.initial = TorusPoint(0.0, 0.0);
  spec.burn_in = 0;
  spec.length = 777;
  DensityRaster r = orbit_raster(F, spec, 32, 32);
  CHECK(r.total == 777);
  int nonzero = 0;
  std::int64_t hit = 0;
  for (auto c : r.counts)
    if (c > 0) {
      ++nonzero;
      hit = c;
    }
  CHECK(nonzero == 1);
  CHECK(hit == 777);
}

TEST_CASE("trapped vs spread regimes in the raster") {
  OrbitSpec spec;  // defaults: burn-in 1e3, length 1e6
  DensityRaster trapped =
      orbit_raster(SkewSystem::experimental(-0.02), spec, 512, 512);
  // find the heaviest contiguous band of height <= 0.2 (102 rows of 512)
  std::vector<std::int64_t> row_mass(512, 0);
  for (int iy = 0; iy < 512; ++iy)
    for (int ix = 0; ix < 512; ++ix) row_mass[iy] += trapped.at(ix, iy);
  const int band = 102;
  std::int64_t best = 0, cur = 0;
  for (int i = 0; i < band; ++i) cur += row_mass[i];
  best = cur;
  for (int i = band; i < 512 + band; ++i) {
    cur += row_mass[i % 512] - row_mass[(i - band) % 512];
    best = std::max(best, cur);
  }
  CHECK(static_cast<double>(best) >= 0.99 * trapped.total);

  DensityRaster spread =
      orbit_raster(SkewSystem::experimental(-0.002), spec, 32, 32);
  for (int iy = 0; iy < 32; ++iy) {
    std::int64_t m = 0;
    for (int ix = 0; ix < 32; ++ix) m += spread.at(ix, iy);
    CHECK(m > 0);
  }
}

TEST_CASE("fiber_fixed_points: doubling") {
  auto fps = fiber_fixed_points(FiberMap::doubling());
  REQUIRE(fps.points.size() == 1);
  CHECK(fps.points[0].location == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fps.points[0].stability == Stability::Repelling);
}

TEST_CASE("fiber_fixed_points: intermittent a = 0 has {0, eps/2}") {
  auto fps =
      fiber_fixed_points(FiberMap::intermittent(0.01, 0.0, default_bump()));
  REQUIRE(fps.points.size() == 2);
  CHECK(circle_dist(fps.points[0].location, 0.0) <= 1e-12);
  CHECK(fps.points[0].stability == Stability::Repelling);
  CHECK(fps.points[1].location == doctest::Approx(0.005).epsilon(1e-9));
  CHECK(fps.points[1].stability == Stability::Neutral);
}

TEST_CASE("fiber_fixed_points: intermittent a = -0.05 has the P0 < P- < P+ "
          "pattern") {
  auto fps =
      fiber_fixed_points(FiberMap::intermittent(0.01, -0.05, default_bump()));
  REQUIRE(fps.points.size() == 3);
  CHECK(std::fabs(fps.points[0].location - 5e-4) <= 1e-12);  // P0 = -a*eps
  CHECK(fps.points[0].stability == Stability::Repelling);
  CHECK(fps.points[1].stability == Stability::Attracting);
  CHECK(fps.points[2].stability == Stability::Repelling);
  CHECK(fps.points[0].location < fps.points[1].location);
  CHECK(fps.points[1].location < fps.points[2].location);
}

TEST_CASE("P- and P+ converge monotonically to eps/2 as a -> 0-") {
  const double half = 0.005;
  double prev_minus = 1e300, prev_plus = 1e300;
  for (double a : {-0.05, -0.02, -0.01, -0.005}) {
    auto fps =
        fiber_fixed_points(FiberMap::intermittent(0.01, a, default_bump()));
    REQUIRE(fps.points.size() == 3);
    double dm = std::fabs(fps.points[1].location - half);
    double dp = std::fabs(fps.points[2].location - half);
    CHECK(dm < prev_minus);
    CHECK(dp < prev_plus);
    prev_minus = dm;
    prev_plus = dp;
  }
}

TEST_CASE("check_trapping holds in the trapped regime") {
  for (double a : {-0.02, -0.01}) {
    SkewSystem F = SkewSystem::theoretical(7, 0.01, a, 0.01);
    auto rep = check_trapping(F, 0.01, a, 0.01, 1000);
    INFO("a=", a, " margin=", rep.worst_margin);
    CHECK(rep.holds);
    CHECK(rep.worst_margin > 0.0);
  }
}

TEST_CASE("check_trapping boundary case a = -delta") {
  SkewSystem F = SkewSystem::theoretical(7, 0.01, -0.01, 0.01);
  auto rep = check_trapping(F, 0.01, -0.01, 0.01, 1000);
  CHECK(rep.holds);
}

TEST_CASE("check_trapping rejects a + delta > 0") {
  SkewSystem F = SkewSystem::theoretical(7, 0.01, 0.005, 0.01);
  CHECK_THROWS_AS(check_trapping(F, 0.01, 0.005, 0.01, 1000),
                  std::domain_error);
}

TEST_CASE("left endpoint of W is exactly fixed by f_{eps,a-delta}") {
  for (double a : {-0.02, -0.05}) {
    const double eps = 0.01, delta = 0.01;
    FiberMap f = FiberMap::intermittent(eps, a - delta, default_bump());
    double y_minus = (delta - a) * eps;
    CHECK(std::fabs(f.lift(y_minus) - y_minus) <= 1e-12);
  }
}

TEST_CASE("uniform expansion certificate") {
  auto a1 = uniform_expansion_certificate(
      FiberMap::intermittent(0.01, 1.0, default_bump()), 2, 4096);
  CHECK(a1.certified);
  CHECK(a1.worst_n <= 2);

  auto small = uniform_expansion_certificate(
      FiberMap::intermittent(0.01, 0.001, default_bump()), 10000, 4096);
  CHECK(small.certified);

  auto neg = uniform_expansion_certificate(
      FiberMap::intermittent(0.01, -0.05, default_bump()), 50, 4096);
  CHECK_FALSE(neg.certified);
}
