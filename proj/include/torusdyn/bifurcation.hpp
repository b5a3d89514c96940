#pragma once

#include <functional>
#include <string>
#include <vector>

#include "torusdyn/dynamics.hpp"
#include "torusdyn/transfer.hpp"

namespace torusdyn {

using FamilyFactory = std::function<SkewSystem(double a)>;

struct SweepRecord {
  double a = 0.0;
  double chi_c = 0.0;
  long n_iter = 0;
  std::uint64_t seed = 0;
};

struct SweepTable {
  std::vector<SweepRecord> records;  // sorted by a, strictly increasing
  std::string family_id;
  double step = 0.0;
};

struct SignChange {
  double lo = 0.0, hi = 0.0;  // bracket with chi(lo) < 0 < chi(hi)
  int iterations = 0;
  double chi_at_lo = 0.0, chi_at_hi = 0.0;
  bool noisy_midpoints = false;
};

// One Lyapunov record per grid value of a (endpoints inclusive); per-record
// seeds derived from (base seed, bits of a) so the sweep is order-free.
SweepTable sweep(const FamilyFactory& family, const std::string& family_id,
                 double a_lo, double a_hi, double step, const OrbitSpec& base);

// Bisection on the sign of chi_c; each midpoint sign is the median over
// three deterministic seeds.  Throws if the bracket endpoints agree in sign.
SignChange find_sign_change(const FamilyFactory& family, double lo, double hi,
                            double resolution, const OrbitSpec& base);

struct SmoothnessRow {
  double h = 0.0;
  double value_minus = 0.0, value_center = 0.0, value_plus = 0.0;
  double first_diff = 0.0;   // (I(a+h) - I(a-h)) / 2h
  double second_diff = 0.0;  // (I(a+h) - 2 I(a) + I(a-h)) / h^2
};

// Finite differences of a -> integral of psi against the Ulam stationary
// density, across a ladder of step sizes.
std::vector<SmoothnessRow> smoothness_diagnostic(
    const FamilyFactory& family, double a_center,
    const std::vector<double>& h_list,
    const std::function<double(double, double)>& psi, int nx, int ny,
    int samples_per_cell, std::uint64_t seed);

}  // namespace torusdyn
