#include "torusdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace torusdyn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double bisect_root(const std::function<double(double)>& g, double lo, double hi,
                   double flo, double tol) {
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double fm = g(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Stability classify(double deriv) {
  if (std::fabs(std::fabs(deriv) - 1.0) <= 1e-6) return Stability::Neutral;
  return std::fabs(deriv) < 1.0 ? Stability::Attracting : Stability::Repelling;
}
}  // namespace

std::vector<TorusPoint> orbit_points(const SkewSystem& F,
                                     const OrbitSpec& spec) {
  std::vector<TorusPoint> out;
  out.reserve(static_cast<std::size_t>(spec.length));
  iterate(F, spec, [&](const TorusPoint& p) { out.push_back(p); });
  return out;
}

LyapunovEstimate central_lyapunov(const SkewSystem& F, const OrbitSpec& spec) {
  if (spec.length < 1000)
    throw std::invalid_argument("central_lyapunov: length must be >= 1e3");
  LyapunovEstimate est;
  est.initial_used = resolve_initial(spec);
  est.n_used = spec.length;
  est.chi_u = std::log(static_cast<double>(F.base_multiplier()));

  KahanSum sum;
  const FiberMap& f = F.fiber();
  iterate(F, spec, [&](const TorusPoint& p) { sum.add(std::log(f.deriv(p.y))); });
  est.chi_c = sum.sum / static_cast<double>(spec.length);
  return est;
}

DensityRaster orbit_raster(const SkewSystem& F, const OrbitSpec& spec, int nx,
                           int ny) {
  if (nx < 16 || ny < 16)
    throw std::invalid_argument("orbit_raster: nx, ny must be >= 16");
  DensityRaster r;
  r.nx = nx;
  r.ny = ny;
  r.counts.assign(static_cast<std::size_t>(nx) * ny, 0);
  iterate(F, spec, [&](const TorusPoint& p) {
    int ix = std::min(nx - 1, static_cast<int>(p.x * nx));
    int iy = std::min(ny - 1, static_cast<int>(p.y * ny));
    ++r.counts[ix + std::size_t(nx) * iy];
    ++r.total;
  });
  return r;
}

FiberFixedPoints fiber_fixed_points(const FiberMap& f) {
  const int scan_n = 1000000;
  const double tol = 1e-14;
  std::vector<double> roots;

  auto g = [&](double y) { return f.lift(y) - y; };

  // value range of g on [0,1); g(y+1) = g(y)+1, so candidate shifts are few
  double gmin = 1e300, gmax = -1e300;
  std::vector<double> gv(scan_n + 1);
  for (int i = 0; i <= scan_n; ++i) {
    double y = static_cast<double>(i) / scan_n;
    gv[i] = g(y);
    gmin = std::min(gmin, gv[i]);
    gmax = std::max(gmax, gv[i]);
  }

  for (long k = static_cast<long>(std::floor(gmin));
       k <= static_cast<long>(std::ceil(gmax)); ++k) {
    for (int i = 0; i < scan_n; ++i) {
      double v0 = gv[i] - k, v1 = gv[i + 1] - k;
      if (v0 == 0.0) {
        if (static_cast<double>(i) / scan_n < 1.0)
          roots.push_back(static_cast<double>(i) / scan_n);
      } else if (v0 * v1 < 0.0) {
        std::function<double(double)> gk = [&](double y) { return g(y) - k; };
        roots.push_back(bisect_root(gk, static_cast<double>(i) / scan_n,
                                    static_cast<double>(i + 1) / scan_n, v0,
                                    tol));
      }
    }
  }

  // tangential fixed points: critical points of g with g at an integer
  auto gp = [&](double y) { return f.deriv(y) - 1.0; };
  double d_prev = gp(0.0);
  for (int i = 1; i <= scan_n; ++i) {
    double y = static_cast<double>(i) / scan_n;
    double d = gp(y);
    if (d_prev * d < 0.0) {
      std::function<double(double)> dd = gp;
      double yc = bisect_root(dd, static_cast<double>(i - 1) / scan_n, y,
                              d_prev, 1e-15);
      double val = g(yc);
      if (std::fabs(val - std::round(val)) <= 1e-12 && yc < 1.0)
        roots.push_back(yc);
    }
    d_prev = d;
  }

  std::sort(roots.begin(), roots.end());
  FiberFixedPoints out;
  for (double y : roots) {
    if (!out.points.empty() &&
        std::fabs(y - out.points.back().location) < 1e-9)
      continue;
    FixedPoint fp;
    fp.location = y;
    fp.derivative = f.deriv(y);
    fp.stability = classify(fp.derivative);
    out.points.push_back(fp);
  }
  return out;
}

TrappingReport check_trapping(const SkewSystem& F, double epsilon, double a,
                              double delta, int grid_n) {
  if (F.fiber().kind() != FiberKind::Intermittent)
    throw std::invalid_argument("check_trapping: theoretical family required");
  if (a + delta > 0.0)
    throw std::domain_error(
        "check_trapping: trapping is asserted only for a + delta <= 0");
  if (grid_n < 1000)
    throw std::invalid_argument("check_trapping: grid_n must be >= 1e3");

  const double y_lo = (delta - a) * epsilon;
  const double y_hi = epsilon / 2.0;
  const FiberMap& f = F.fiber();
  const double coupling = F.coupling();

  double margin = 1e300;
  for (int j = 0; j < grid_n; ++j) {
    double c = coupling * std::cos(kTwoPi * j / grid_n);
    for (int i = 1; i < grid_n; ++i) {
      double y = y_lo + (y_hi - y_lo) * i / grid_n;
      double image = f.lift(y) + c;
      margin = std::min(margin, std::min(image - y_lo, y_hi - image));
    }
  }
  TrappingReport rep;
  rep.worst_margin = margin;
  rep.holds = margin > 0.0;
  return rep;
}

ExpansionReport uniform_expansion_certificate(const FiberMap& f, int n_max,
                                              int grid_n) {
  if (n_max < 1)
    throw std::invalid_argument("uniform_expansion_certificate: n_max >= 1");

  // global second-derivative bound, estimated numerically with headroom
  double lip = 0.0;
  {
    const int m = 1 << 20;
    const double h = 1e-7;
    for (int i = 0; i < m; ++i) {
      double y = static_cast<double>(i) / m;
      double d2 = (f.deriv(y + h) - f.deriv(y - h)) / (2.0 * h);
      lip = std::max(lip, std::fabs(d2));
    }
    lip *= 1.25;
  }

  // padded per-subinterval lower bounds of f'
  const int K = 1 << 16;
  const double w = 1.0 / K;
  std::vector<double> lb(K);
  double global_min = 1e300;
  for (int i = 0; i < K; ++i) {
    double m = 1e300;
    for (int j = 0; j <= 4; ++j)
      m = std::min(m, f.deriv((i + 0.25 * j) * w));
    lb[i] = m - lip * w / 8.0;
    global_min = std::min(global_min, lb[i]);
  }

  auto interval_min = [&](double lo, double hi) {
    double span = hi - lo;
    if (span >= 1.0) return global_min;
    double frac = lo - std::floor(lo);
    int i0 = static_cast<int>(frac * K);
    int i1 = static_cast<int>((frac + span) * K);
    if (i1 - i0 + 1 > 4096) return global_min;
    double m = 1e300;
    for (int i = i0; i <= i1; ++i) m = std::min(m, lb[i % K]);
    return m;
  };

  auto expand_by = [&](double lo, double hi) {
    // least n with a certified (f^n)' > 1 on [lo, hi], or 0 on failure
    double prod = 1.0;
    for (int n = 1; n <= n_max; ++n) {
      prod *= interval_min(lo, hi);
      if (prod > 1.0) return n;
      if (hi - lo >= 1.0 && global_min <= 1.0) return 0;  // cannot recover
      lo = f.lift(lo);
      hi = f.lift(hi);
      double shift = std::floor(lo);
      lo -= shift;
      hi -= shift;
    }
    return 0;
  };

  // Cells straddling a slow channel smear out before their product
  // recovers; subdivide those adaptively before giving up.
  constexpr int kMaxDepth = 14;
  std::function<bool(double, double, int, ExpansionReport&)> certify =
      [&](double lo, double hi, int depth, ExpansionReport& rep) {
        int n = expand_by(lo, hi);
        if (n > 0) {
          rep.worst_n = std::max(rep.worst_n, n);
          return true;
        }
        if (depth >= kMaxDepth) return false;
        double mid = 0.5 * (lo + hi);
        return certify(lo, mid, depth + 1, rep) &&
               certify(mid, hi, depth + 1, rep);
      };

  ExpansionReport rep;
  rep.certified = true;
  for (int c = 0; c < grid_n; ++c) {
    if (!certify(static_cast<double>(c) / grid_n,
                 static_cast<double>(c + 1) / grid_n, 0, rep))
      rep.certified = false;
  }
  return rep;
}

}  // namespace torusdyn
