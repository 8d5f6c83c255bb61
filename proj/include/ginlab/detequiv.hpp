#pragma once

#include <span>
#include <vector>

#include "ginlab/linalg.hpp"

namespace ginlab {

// Singular values of the shifted deformation A0 - z (descending), the raw
// input to every deterministic-equivalent quantity at the point z.
struct ShiftedSpectrum {
  cplx z{0.0, 0.0};
  std::vector<double> sigma;  // singular values, descending

  int size() const { return static_cast<int>(sigma.size()); }
};

ShiftedSpectrum shifted_spectrum(const CMatrix& a0, cplx z);

// Bulk criterion: mean of 1/sigma_k^2 (infinite when a singular value
// vanishes). The point is in the spectral support iff this is >= 1, and the
// fixed-point equation below is solvable iff it is > 1.
double support_criterion(const ShiftedSpectrum& sp);
bool in_support(const CMatrix& a0, cplx z);

// Solves mean_k 1/(u^2 + sigma_k^2) = 1 for u > 0 (safeguarded Newton inside
// a maintained bracket). Throws OutsideBulkError when the criterion is <= 1.
struct FixedPointResult {
  double u_star = 0.0;
  double residual = 0.0;  // mean_k 1/(u*^2+sigma_k^2) - 1 at the solution
  int iterations = 0;
};
FixedPointResult solve_fixed_point(const ShiftedSpectrum& sp,
                                   double tol = 1e-12);

// Scalar characteristics of the deterministic equivalent at (A0, z), all
// computed from one SVD of A0 - z with G = (A_z A_z^* + u*^2)^{-1}:
//   g2      = n^-1 Tr G^2
//   k_a     = n^-1 Tr A_z G
//   h_a     = n^-1 Tr A_z G^2
//   f_a     = n^-1 Tr (A_z G)^2
//   gg_star = n^-1 Tr G G_*          (G_* from A_z^* A_z)
//   rho     = u*^2 gg_star + |h_a|^2 / g2
//   c2      = -f''(u*) = 4 u*^2 g2   (curvature of the saddle profile)
struct ScalarCharacteristics {
  cplx z{0.0, 0.0};
  double u_star = 0.0;
  double u_star_sq = 0.0;
  double rho = 0.0;
  double g2 = 0.0;
  cplx k_a{0.0, 0.0};
  cplx h_a{0.0, 0.0};
  cplx f_a{0.0, 0.0};
  double gg_star = 0.0;
  double c2 = 0.0;
  double fixed_point_residual = 0.0;
  double criterion = 0.0;  // bulk criterion value at z
  bool in_bulk = false;
};
ScalarCharacteristics scalar_characteristics(const CMatrix& a0, cplx z,
                                             double tol = 1e-12);

// Saddle profile f(u) = n^-1 sum_k log(u^2 + sigma_k^2) - u^2 with analytic
// first and second derivatives. Throws DomainError when u^2 + sigma_k^2
// vanishes for some k (u = 0 with a zero singular value).
struct ProfilePoint {
  double u = 0.0;
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};
std::vector<ProfilePoint> saddle_profile(const ShiftedSpectrum& sp,
                                         std::span<const double> u_values);

// Rectangular scan grid: nx-by-ny cells, (nx+1)-by-(ny+1) nodes.
struct ScanRegion {
  double x_min = -1.5, x_max = 1.5;
  double y_min = -1.5, y_max = 1.5;
  int nx = 200, ny = 200;

  double dx() const { return (x_max - x_min) / nx; }
  double dy() const { return (y_max - y_min) / ny; }
};

// Level-set segment of the support boundary (criterion == 1).
struct BoundarySegment {
  double x1, y1, x2, y2;
};

struct SupportScan {
  ScanRegion region;
  Eigen::MatrixXd field;  // criterion values at nodes, (nx+1) x (ny+1)
  std::vector<BoundarySegment> segments;
};

// Marching-squares extraction of the boundary curve {criterion(z) = 1}.
// refine_iters > 0 polishes each crossing along its grid edge by bisection
// (one extra SVD per iteration). Deterministic output ordering for any
// thread count.
SupportScan support_boundary_scan(const CMatrix& a0, const ScanRegion& region,
                                  int refine_iters = 0, int threads = 1);

// Finite-n checks on the deformation at z. The squared-norm bound and the
// regularized-resolvent margin are asserted; the empirical distribution of
// squared singular values is reported (as a histogram) but has no finite-n
// pass/fail meaning, so it is never asserted.
struct AssumptionReport {
  double norm_sq_mean = 0.0;  // n^-1 sum |(A0)_ij|^2
  double norm_bound = 10.0;
  bool norm_ok = false;
  double eps = 0.1;
  double resolvent_value = 0.0;   // n^-1 sum 1/(sigma_k^2 + eps^2)
  double resolvent_margin = 0.0;  // value - 1
  double margin_required = 0.01;
  bool resolvent_ok = false;
  std::vector<double> histogram_edges;   // squared-singular-value histogram
  std::vector<double> histogram_counts;  // (reported, not asserted)
  std::string note;
};
AssumptionReport check_assumptions(const CMatrix& a0, cplx z, double eps = 0.1,
                                   double norm_bound = 10.0,
                                   double margin_required = 0.01);

// Scans the region and returns the grid point maximizing the regularized
// resolvent margin among points that pass both the strict bulk criterion
// and the margin requirement. ok=false when no grid point qualifies.
struct BulkPointCandidate {
  cplx z{0.0, 0.0};
  double criterion = 0.0;
  double margin = 0.0;
  bool ok = false;
};
BulkPointCandidate pick_bulk_point(const CMatrix& a0, const ScanRegion& region,
                                   double eps = 0.1,
                                   double margin_required = 0.01,
                                   int threads = 1);

}  // namespace ginlab
