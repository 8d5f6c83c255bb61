#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ginlab/detequiv.hpp"
#include "ginlab/ensemble.hpp"
#include "ginlab/linalg.hpp"

namespace ginlab {

// Smallest singular value of H - z.
double smallest_singular_value(const CMatrix& h, cplx z);

// Smooth radial bump supported on |z - center| < radius, with an analytic
// 2D Laplacian; the standard C-infinity mollifier profile.
struct RadialBump {
  cplx center{0.0, 0.0};
  double radius = 1.0;

  double value(cplx z) const;
  double laplacian(cplx z) const;
};

// Checks the spectral counting identity for one matrix sample:
//   sum_j f(lambda_j) = (1/4pi) * integral of Laplacian(f)(z) log det Y(z)
// with Y(z) = (H - z)(H - z)^*, by midpoint quadrature on an nx-by-ny cell
// grid over `region`. log det Y is evaluated through singular values with a
// tiny floor; floored points are counted in `flagged_points`.
//
// Convention note: the prefactor 1/(4pi) pairs with the full 2D Laplacian
// d^2/dx^2 + d^2/dy^2. Writing the identity with d^2/(dz dzbar) instead
// changes the constant by exactly 4; run manifests record this choice.
struct CountingIdentityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  int flagged_points = 0;
  int evaluated_points = 0;
};
CountingIdentityResult girko_identity_check(const CMatrix& h,
                                            std::span<const cplx> eigs,
                                            const RadialBump& f,
                                            const ScanRegion& region,
                                            int threads = 1);

// Monte Carlo estimate of the determinant-ratio generating functional
//   E prod_j det(Y(z_j) + (eps_j/n)^2) / det(Y(z'_j) + (eps'/n)^2),
// z_j = z0 + zeta_j/sqrt(n), z'_j = z0 + zeta'_j/sqrt(n), j = 1,2.
// Per-trial evaluation happens in log space; aggregation uses max-shifted
// exponentials so overflow cannot occur.
struct GeneratingFunctionalParams {
  cplx z0{0.0, 0.0};
  std::array<cplx, 2> zeta{cplx(0.0, 0.0), cplx(0.0, 0.0)};
  std::array<double, 2> eps{1.0, 1.0};
  std::array<cplx, 2> zeta_prime{cplx(0.0, 0.0), cplx(0.0, 0.0)};
  double eps_prime = 1.0;
};
struct GeneratingFunctionalResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double log_mean = 0.0;
  double rel_std_error = 0.0;
  int trials = 0;
  int failed_trials = 0;
};
GeneratingFunctionalResult generating_functional_mc(
    const DeformationSpec& spec, int n, const GeneratingFunctionalParams& p,
    int trials, std::uint64_t seed, int threads = 1);

// Paired Monte Carlo check that regularizing both log-determinants is a
// second-order effect on the product expectation.  With
//   A = log det Y(z1),  A_eps = log det(Y(z1) + (eps1/n)^2 I),
// and B, B_eps likewise at z2, the check measures the doubly-differenced
// product
//   delta = |E[(A - A_eps1)(B - B_eps2)]|,
// i.e. the rectangle increment of F(s,t) = E[A_s B_t] over [0,eps1]x[0,eps2],
// which is what a uniform bound on the mixed derivative d^2F/ds dt controls:
// delta <= const * eps1 * eps2.  (The single-leg differences E[(A - A_eps)B]
// pick up an extra log(1/eps) factor from the hard edge of Y and do not obey
// an eps1*eps2 bound at fixed n, so they are deliberately excluded.)
// The ladder uses eps1 = eps2 = eps; bound_ratio = delta/eps^2 must not
// trend upward as eps decreases (fitted slope <= 0 within two sigma).
struct SmoothingCheckResult {
  std::vector<double> eps;
  std::vector<double> delta;
  std::vector<double> delta_std_error;
  std::vector<double> bound_ratio;
  std::vector<double> bound_ratio_std_error;
  double slope = 0.0;
  double slope_std_error = 0.0;
  bool nonincreasing_within_2se = false;
  int trials = 0;
};
SmoothingCheckResult logdet_smoothing_check(const DeformationSpec& spec, int n,
                                            cplx z1, cplx z2,
                                            std::span<const double> eps_ladder,
                                            int trials, std::uint64_t seed,
                                            int threads = 1);

}  // namespace ginlab
