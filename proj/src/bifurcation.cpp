#include "torusdyn/bifurcation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace torusdyn {

namespace {

std::uint64_t seed_for(std::uint64_t master, double a) {
  return derive_seed(master, std::bit_cast<std::uint64_t>(a));
}

double chi_at(const FamilyFactory& family, double a, const OrbitSpec& base,
              std::uint64_t seed) {
  OrbitSpec spec = base;
  spec.initial.reset();
  spec.seed = seed;
  return central_lyapunov(family(a), spec).chi_c;
}

// Median chi over three deterministic seeds; unanimity of signs reported.
double median_chi(const FamilyFactory& family, double a, const OrbitSpec& base,
                  bool* unanimous) {
  double chi[3];
  for (std::uint64_t i = 0; i < 3; ++i)
    chi[i] = chi_at(family, a, base, derive_seed(seed_for(base.seed, a), i));
  std::sort(chi, chi + 3);
  if (unanimous) *unanimous = (chi[0] > 0.0) == (chi[2] > 0.0);
  return chi[1];
}

}  // namespace

SweepTable sweep(const FamilyFactory& family, const std::string& family_id,
                 double a_lo, double a_hi, double step, const OrbitSpec& base) {
  if (!(step > 0.0) || !(a_lo < a_hi))
    throw std::invalid_argument("sweep: need step > 0 and a_lo < a_hi");

  SweepTable table;
  table.family_id = family_id;
  table.step = step;
  const long count = std::lround((a_hi - a_lo) / step);
  for (long i = 0; i <= count; ++i) {
    double a = a_lo + i * step;
    if (i == count) a = a_hi;
    SweepRecord rec;
    rec.a = a;
    rec.seed = seed_for(base.seed, a);
    rec.n_iter = base.length;
    rec.chi_c = chi_at(family, a, base, rec.seed);
    table.records.push_back(rec);
  }
  return table;
}

SignChange find_sign_change(const FamilyFactory& family, double lo, double hi,
                            double resolution, const OrbitSpec& base) {
  if (!(lo < hi) || !(resolution > 0.0))
    throw std::invalid_argument("find_sign_change: bad bracket or resolution");

  double chi_lo = chi_at(family, lo, base, seed_for(base.seed, lo));
  double chi_hi = chi_at(family, hi, base, seed_for(base.seed, hi));
  if (!(chi_lo < 0.0 && chi_hi > 0.0))
    throw std::runtime_error(
        "find_sign_change: endpoint exponents do not bracket a sign change");

  SignChange sc;
  sc.lo = lo;
  sc.hi = hi;
  sc.chi_at_lo = chi_lo;
  sc.chi_at_hi = chi_hi;
  while (sc.hi - sc.lo > resolution) {
    double mid = 0.5 * (sc.lo + sc.hi);
    bool unanimous = false;
    double chi_mid = median_chi(family, mid, base, &unanimous);
    if (!unanimous) {
      // noisy midpoint: retry once with fresh seeds before trusting the median
      sc.noisy_midpoints = true;
      OrbitSpec retry = base;
      retry.seed = derive_seed(base.seed, 0x9e77ULL);
      chi_mid = median_chi(family, mid, retry, &unanimous);
    }
    if (chi_mid < 0.0) {
      sc.lo = mid;
      sc.chi_at_lo = chi_mid;
    } else {
      sc.hi = mid;
      sc.chi_at_hi = chi_mid;
    }
    ++sc.iterations;
  }
  return sc;
}

std::vector<SmoothnessRow> smoothness_diagnostic(
    const FamilyFactory& family, double a_center,
    const std::vector<double>& h_list,
    const std::function<double(double, double)>& psi, int nx, int ny,
    int samples_per_cell, std::uint64_t seed) {
  double h_max = 0.0;
  for (double h : h_list) h_max = std::max(h_max, h);

  auto integral = [&](double a) {
    UlamOperator op = ulam_2d(family(a), nx, ny, samples_per_cell,
                              seed_for(seed, a));
    SpectralReport rep = stationary_density(op);
    return integrate_observable(op, rep.stationary, psi);
  };

  double center = integral(a_center);
  std::vector<SmoothnessRow> rows;
  for (double h : h_list) {
    SmoothnessRow row;
    row.h = h;
    row.value_center = center;
    row.value_minus = integral(a_center - h);
    row.value_plus = integral(a_center + h);
    row.first_diff = (row.value_plus - row.value_minus) / (2.0 * h);
    row.second_diff =
        (row.value_plus - 2.0 * center + row.value_minus) / (h * h);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace torusdyn
