#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ginlab/detequiv.hpp"
#include "ginlab/ensemble.hpp"
#include "ginlab/linalg.hpp"

namespace ginlab {

// Eigenvalues rescaled around z0: zeta = sqrt(n) (lambda - z0), keeping
// |zeta| <= window_radius.
struct Cloud {
  std::vector<cplx> points;
};
Cloud rescale_cloud(std::span<const cplx> eigs, cplx z0, int n,
                    double window_radius);

struct PairCorrConfig {
  double window_radius = 8.0;
  double inner_margin = 4.0;  // erosion depth; must be >= r_max
  double bin_width = 0.1;
  double r_max = 4.0;
};

// Annulus-binned pair correlation from rescaled clouds.
//
// density_hat     = (total points in window) / (trials * window area)
// g[k]            = (ordered pairs with the first point in the eroded
//                    window and separation in bin k)
//                   / (trials * mean inner count * density_hat * bin area)
// The erosion removes edge bias: every annulus around an eroded first point
// lies inside the window. Errors are leave-one-trial-out jackknife; empty
// bins report g = 0 with count 0 (never NaN).
struct PairCorrResult {
  std::vector<double> r_lo, r_mid, r_hi;
  std::vector<double> g;
  std::vector<double> g_std_error;
  std::vector<long long> counts;
  double density_hat = 0.0;
  double mean_window_count = 0.0;
  double mean_inner_count = 0.0;
  int trials = 0;
};
PairCorrResult pair_correlation(const std::vector<Cloud>& clouds,
                                const PairCorrConfig& cfg);

// Exact finite-n pair-correlation oracle for the zero deformation at z0
// (|z0| well inside the unit disk), from the squared reproducing-kernel
// ratio; evaluated in log space with max-term scaling. The separation
// direction is the real axis (at z0 = 0 the statistic is isotropic).
double ginibre_pair_oracle(int n, cplx z0, double r);

// Limiting prediction g(r) = 1 - exp(-rho r^2).
double universal_prediction(double rho, double r);

// End-to-end universality comparison at (deformation, n, z0):
// deterministic-equivalent rho, Monte Carlo clouds, binned estimator,
// sup-distance against the limiting prediction over r <= sup_r_max, and the
// density calibration |pi * density_hat - rho|.
struct UniversalityReport {
  ScalarCharacteristics equiv;
  PairCorrResult estimate;
  std::vector<double> prediction;   // per bin at r_mid
  std::vector<double> z_scores;     // (g - prediction)/se per bin
  double sup_distance = 0.0;        // over bins with r_mid <= sup_r_max
  double sup_r_max = 3.0;
  double density_residual = 0.0;    // |pi * density_hat - rho|
  double sup_tolerance = 0.05;
  double density_tolerance = 0.03;
  bool sup_ok = false;
  bool density_ok = false;
  int failed_trials = 0;
};
UniversalityReport universality_run(const DeformationSpec& spec, int n,
                                    cplx z0, int trials, std::uint64_t seed,
                                    const PairCorrConfig& cfg,
                                    double sup_r_max = 3.0,
                                    double sup_tolerance = 0.05,
                                    double density_tolerance = 0.03,
                                    int threads = 1);

}  // namespace ginlab
