#include "torusdyn/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "torusdyn/rng.hpp"

namespace torusdyn {

namespace {

int clamp_cell(double coord, int n) {
  int i = static_cast<int>(coord * n);
  return std::min(std::max(i, 0), n - 1);
}

double geometric_mean(const std::vector<double>& v, std::size_t count) {
  double s = 0.0;
  std::size_t n0 = v.size() - count;
  for (std::size_t i = n0; i < v.size(); ++i) s += std::log(v[i]);
  return std::exp(s / static_cast<double>(count));
}

// Growth rate of M on the sum-zero complement of the stationary direction.
double subleading_estimate(const Eigen::SparseMatrix<double>& M,
                           const Eigen::VectorXd& stationary,
                           std::uint64_t seed) {
  const int n = static_cast<int>(M.rows());
  const int max_it = 300;
  const std::size_t window = 20;
  double best = 0.0;
  for (int restart = 0; restart < 10; ++restart) {
    SplitMix64 gen(derive_seed(seed, 0x51b1ed1ULL + restart));
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = gen.next_double() - 0.5;
    w -= stationary * w.sum();  // deflate against the left eigenvector 1
    double nrm = w.norm();
    if (nrm == 0.0) continue;
    w /= nrm;

    std::vector<double> ratios;
    double est = 0.0;
    for (int it = 0; it < max_it; ++it) {
      Eigen::VectorXd w2 = M * w;
      w2 -= stationary * w2.sum();
      double r = w2.norm();
      if (r < 1e-150) {
        est = 0.0;
        ratios.clear();
        break;
      }
      w = w2 / r;
      ratios.push_back(r);
      if (ratios.size() >= 2 * window) {
        double recent = geometric_mean(ratios, window);
        std::vector<double> prev(ratios.begin(), ratios.end() - window);
        double before = geometric_mean(prev, window);
        if (std::fabs(recent - before) < 1e-6 * std::max(recent, 1e-30)) {
          est = recent;
          break;
        }
      }
    }
    if (!ratios.empty() && est == 0.0)
      est = geometric_mean(ratios, std::min(window, ratios.size()));
    best = std::max(best, est);
  }
  return best;
}

}  // namespace

double pf_apply_exact(const SkewSystem& F,
                      const std::function<double(TorusPoint)>& u,
                      const TorusPoint& p, double tol) {
  double sum = 0.0;
  for (const TorusPoint& q : F.preimages(p, tol))
    sum += u(q) / std::fabs(F.jacobian_det(q));
  return sum;
}

UlamOperator ulam_1d(const FiberMap& f, int n, int samples_per_cell,
                     std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("ulam_1d: n must be >= 2");
  if (samples_per_cell < 32)
    throw std::invalid_argument("ulam_1d: samples_per_cell must be >= 32");

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * samples_per_cell);
  const double weight = 1.0 / samples_per_cell;
  for (int j = 0; j < n; ++j) {
    SplitMix64 gen(derive_seed(seed, static_cast<std::uint64_t>(j)));
    for (int s = 0; s < samples_per_cell; ++s) {
      double y = (j + (s + gen.next_double()) / samples_per_cell) / n;
      int i = clamp_cell(f.eval(y), n);
      trips.emplace_back(i, j, weight);
    }
  }
  UlamOperator op;
  op.nx = n;
  op.ny = 1;
  op.samples_per_cell = samples_per_cell;
  op.seed = seed;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  return op;
}

UlamOperator ulam_1d_preimage(const FiberMap& f, int n, double tol) {
  if (n < 2) throw std::invalid_argument("ulam_1d_preimage: n must be >= 2");

  auto invert = [&](double target, double lo, double hi) {
    // lift is strictly increasing; target assumed within [lift(lo), lift(hi)]
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      (f.lift(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<Eigen::Triplet<double>> trips;
  for (int j = 0; j < n; ++j) {
    double ylo = static_cast<double>(j) / n;
    double yhi = static_cast<double>(j + 1) / n;
    double vlo = f.lift(ylo), vhi = f.lift(yhi);
    // split [ylo, yhi] at the preimages of cell boundaries inside the image
    std::vector<double> cuts{ylo};
    long b0 = static_cast<long>(std::ceil(vlo * n));
    long b1 = static_cast<long>(std::floor(vhi * n));
    for (long b = b0; b <= b1; ++b) {
      double target = static_cast<double>(b) / n;
      if (target <= vlo || target >= vhi) continue;
      cuts.push_back(invert(target, ylo, yhi));
    }
    cuts.push_back(yhi);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      double mass = (cuts[k + 1] - cuts[k]) * n;
      if (mass <= 0.0) continue;
      double mid = 0.5 * (cuts[k] + cuts[k + 1]);
      int i = clamp_cell(f.eval(mid), n);
      trips.emplace_back(i, j, mass);
    }
  }
  UlamOperator op;
  op.nx = n;
  op.ny = 1;
  op.samples_per_cell = 0;
  op.seed = 0;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  return op;
}

UlamOperator ulam_2d(const SkewSystem& F, int nx, int ny, int samples_per_cell,
                     std::uint64_t seed) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("ulam_2d: grid too small");
  if (samples_per_cell < 16)
    throw std::invalid_argument("ulam_2d: samples_per_cell must be >= 16");

  // stratify as a gx x gy sublattice with per-cell jitter
  int gx = static_cast<int>(std::sqrt(static_cast<double>(samples_per_cell)));
  while (samples_per_cell % gx != 0) --gx;
  const int gy = samples_per_cell / gx;
  const double weight = 1.0 / samples_per_cell;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nx) * ny * samples_per_cell);
  for (int jy = 0; jy < ny; ++jy) {
    for (int jx = 0; jx < nx; ++jx) {
      int j = jx + nx * jy;
      SplitMix64 gen(derive_seed(seed, static_cast<std::uint64_t>(j)));
      for (int sy = 0; sy < gy; ++sy) {
        for (int sx = 0; sx < gx; ++sx) {
          double x = (jx + (sx + gen.next_double()) / gx) / nx;
          double y = (jy + (sy + gen.next_double()) / gy) / ny;
          TorusPoint q = F.eval(TorusPoint(x, y));
          int i = clamp_cell(q.x, nx) + nx * clamp_cell(q.y, ny);
          trips.emplace_back(i, j, weight);
        }
      }
    }
  }
  UlamOperator op;
  op.nx = nx;
  op.ny = ny;
  op.samples_per_cell = samples_per_cell;
  op.seed = seed;
  op.matrix.resize(nx * ny, nx * ny);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  return op;
}

SpectralReport stationary_density(const UlamOperator& op, double tol,
                                  int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("stationary_density: tol > 0");
  const int n = op.cells();
  const Eigen::SparseMatrix<double>& M = op.matrix;

  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / n);
  SpectralReport rep;
  rep.residual = 1e300;
  int it = 0;
  for (; it < max_iter; ++it) {
    Eigen::VectorXd mv = M * v;
    rep.residual = (mv - v).cwiseAbs().maxCoeff();
    double s = mv.sum();
    v = mv / s;
    if (rep.residual <= tol) break;
  }
  rep.iterations = it;
  rep.slow_mixing = rep.residual > tol;
  rep.stationary = v;
  rep.leading = (M * v).sum() / v.sum();
  rep.subleading_modulus = subleading_estimate(M, v, op.seed);
  return rep;
}

double integrate_observable(const UlamOperator& op,
                            const Eigen::VectorXd& stationary,
                            const std::function<double(double, double)>& psi) {
  KahanSum sum;
  for (int j = 0; j < op.cells(); ++j)
    sum.add(stationary[j] * psi(op.center_x(j), op.center_y(j)));
  return sum.sum;
}

double integrate_observable_1d(const UlamOperator& op,
                               const Eigen::VectorXd& stationary,
                               const std::function<double(double)>& psi) {
  return integrate_observable(op, stationary,
                              [&](double, double y) { return psi(y); });
}

void write_ulam(const UlamOperator& op, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("write_ulam: cannot open " + path);
  auto put32 = [&](std::uint32_t v) { std::fwrite(&v, 4, 1, fp); };
  auto put64 = [&](std::uint64_t v) { std::fwrite(&v, 8, 1, fp); };
  std::fwrite("ULAM", 1, 4, fp);
  put32(1u);
  put32(static_cast<std::uint32_t>(op.nx));
  put32(static_cast<std::uint32_t>(op.ny));
  put64(static_cast<std::uint64_t>(op.matrix.nonZeros()));
  put64(op.seed);
  for (int k = 0; k < op.matrix.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator iter(op.matrix, k); iter;
         ++iter) {
      put32(static_cast<std::uint32_t>(iter.row()));
      put32(static_cast<std::uint32_t>(iter.col()));
      double v = iter.value();
      std::fwrite(&v, 8, 1, fp);
    }
  }
  std::fclose(fp);
}

UlamOperator read_ulam(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw std::runtime_error("read_ulam: cannot open " + path);
  char magic[4];
  std::uint32_t version, nx, ny;
  std::uint64_t nnz, seed;
  if (std::fread(magic, 1, 4, fp) != 4 || std::memcmp(magic, "ULAM", 4) != 0 ||
      std::fread(&version, 4, 1, fp) != 1 || std::fread(&nx, 4, 1, fp) != 1 ||
      std::fread(&ny, 4, 1, fp) != 1 || std::fread(&nnz, 8, 1, fp) != 1 ||
      std::fread(&seed, 8, 1, fp) != 1) {
    std::fclose(fp);
    throw std::runtime_error("read_ulam: bad header in " + path);
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(nnz);
  for (std::uint64_t k = 0; k < nnz; ++k) {
    std::uint32_t row, col;
    double val;
    if (std::fread(&row, 4, 1, fp) != 1 || std::fread(&col, 4, 1, fp) != 1 ||
        std::fread(&val, 8, 1, fp) != 1) {
      std::fclose(fp);
      throw std::runtime_error("read_ulam: truncated triples in " + path);
    }
    trips.emplace_back(static_cast<int>(row), static_cast<int>(col), val);
  }
  std::fclose(fp);
  UlamOperator op;
  op.nx = static_cast<int>(nx);
  op.ny = static_cast<int>(ny);
  op.seed = seed;
  int n = op.cells();
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  return op;
}

}  // namespace torusdyn
