#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "torusdyn/skew.hpp"

namespace torusdyn {

// Ulam discretization: column j of `matrix` is the pushforward of the
// uniform density on cell j.  1D operators use ny == 1 with the single
// coordinate interpreted as y.
struct UlamOperator {
  int nx = 0, ny = 0;  // cell grid; total cells = nx * ny
  Eigen::SparseMatrix<double> matrix;
  int samples_per_cell = 0;
  std::uint64_t seed = 0;

  int cells() const { return nx * ny; }
  // center of cell j (x in [0,1), y in [0,1); for 1D x is reported as 0)
  double center_x(int j) const { return ny == 1 ? 0.0 : ((j % nx) + 0.5) / nx; }
  double center_y(int j) const {
    return ny == 1 ? (j + 0.5) / nx : ((j / nx) + 0.5) / ny;
  }
};

struct SpectralReport {
  double leading = 0.0;
  double subleading_modulus = 0.0;
  Eigen::VectorXd stationary;  // nonnegative, sums to 1
  int iterations = 0;
  double residual = 0.0;       // max-norm of M*stationary - stationary
  bool slow_mixing = false;
};

// Exact pointwise Perron-Frobenius action: sum of u over the 2m preimages
// of p, each weighted by 1/|det DF|.
double pf_apply_exact(const SkewSystem& F,
                      const std::function<double(TorusPoint)>& u,
                      const TorusPoint& p, double tol = 1e-12);

// Ulam matrix over n circle cells by stratified forward sampling.
UlamOperator ulam_1d(const FiberMap& f, int n, int samples_per_cell,
                     std::uint64_t seed);

// Exact preimage-measure route for the 1D matrix (sampling cross-check).
UlamOperator ulam_1d_preimage(const FiberMap& f, int n, double tol = 1e-12);

// Ulam matrix over an nx x ny torus grid by stratified forward sampling.
UlamOperator ulam_2d(const SkewSystem& F, int nx, int ny, int samples_per_cell,
                     std::uint64_t seed);

// Power iteration for the stationary density plus a deflated power
// iteration estimate of the subleading eigenvalue modulus.
SpectralReport stationary_density(const UlamOperator& op, double tol = 1e-10,
                                  int max_iter = 100000);

double integrate_observable(const UlamOperator& op,
                            const Eigen::VectorXd& stationary,
                            const std::function<double(double, double)>& psi);

double integrate_observable_1d(const UlamOperator& op,
                               const Eigen::VectorXd& stationary,
                               const std::function<double(double)>& psi);

// Binary dump: "ULAM", version u32, nx u32, ny u32, nnz u64, seed u64,
// then (row u32, col u32, value f64) triples, all little-endian.
void write_ulam(const UlamOperator& op, const std::string& path);
UlamOperator read_ulam(const std::string& path);

}  // namespace torusdyn
