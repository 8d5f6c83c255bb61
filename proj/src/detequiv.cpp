#include "ginlab/detequiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ginlab/errors.hpp"
#include "ginlab/parallel.hpp"

namespace ginlab {

namespace {

// Below this, a squared singular value is treated as an exact zero (its
// inverse contribution is infinite and the point is inside the support).
constexpr double kZeroFloor = 1e-280;

double mean_inverse_square(std::span<const double> sigma) {
  double sum = 0.0;
  for (double s : sigma) {
    const double s2 = s * s;
    if (s2 < kZeroFloor) return std::numeric_limits<double>::infinity();
    sum += 1.0 / s2;
  }
  return sum / static_cast<double>(sigma.size());
}

// mean_k 1/(u^2 + sigma_k^2) and its u-derivative.
struct PhiEval {
  double phi;
  double dphi;
};
PhiEval eval_phi(std::span<const double> sigma, double u) {
  const double u2 = u * u;
  double s = 0.0, d = 0.0;
  for (double sg : sigma) {
    const double den = u2 + sg * sg;
    const double inv = 1.0 / den;
    s += inv;
    d += inv * inv;
  }
  const auto n = static_cast<double>(sigma.size());
  return {s / n, -2.0 * u * d / n};
}

}  // namespace

ShiftedSpectrum shifted_spectrum(const CMatrix& a0, cplx z) {
  if (a0.rows() != a0.cols() || a0.rows() == 0)
    throw DomainError("shifted_spectrum: need a nonempty square matrix");
  CMatrix az = a0;
  az.diagonal().array() -= z;
  const Eigen::VectorXd s = singular_values(az);
  ShiftedSpectrum sp;
  sp.z = z;
  sp.sigma.assign(s.data(), s.data() + s.size());
  return sp;
}

double support_criterion(const ShiftedSpectrum& sp) {
  if (sp.sigma.empty()) throw DomainError("support_criterion: empty spectrum");
  return mean_inverse_square(sp.sigma);
}

bool in_support(const CMatrix& a0, cplx z) {
  return support_criterion(shifted_spectrum(a0, z)) >= 1.0;
}

FixedPointResult solve_fixed_point(const ShiftedSpectrum& sp, double tol) {
  if (sp.sigma.empty()) throw DomainError("solve_fixed_point: empty spectrum");
  if (!(tol > 0.0) || tol > 1e-3)
    throw DomainError("solve_fixed_point: tol must be in (0, 1e-3]");
  const double criterion = support_criterion(sp);
  if (!(criterion > 1.0))
    throw OutsideBulkError(
        "solve_fixed_point: bulk criterion " + std::to_string(criterion) +
            " is not > 1; no positive solution exists",
        criterion);

  // phi(u) = mean 1/(u^2+sigma^2) decreases strictly from `criterion` (>1,
  // possibly infinite) at u=0 to below 1 at u_hi, so a bracket exists.
  const double sigma_max =
      *std::max_element(sp.sigma.begin(), sp.sigma.end());
  double lo = 0.0;
  double hi = 1.0 + sigma_max;  // phi(hi) <= 1/hi^2 < 1
  double u = std::min(1.0, 0.5 * hi);
  FixedPointResult res;
  PhiEval e = eval_phi(sp.sigma, u);
  for (int it = 0; it < 200; ++it) {
    ++res.iterations;
    if (e.phi > 1.0)
      lo = u;
    else
      hi = u;
    if (!(lo < hi)) throw Error("solve_fixed_point: bracket collapsed");
    double next = u - (e.phi - 1.0) / e.dphi;  // Newton proposal
    if (!std::isfinite(next) || next <= lo || next >= hi)
      next = 0.5 * (lo + hi);  // bisection fallback keeps the bracket
    u = next;
    e = eval_phi(sp.sigma, u);
    const bool tight_bracket = (hi - lo) <= tol * std::max(u, 1.0);
    if (std::abs(e.phi - 1.0) <= tol && tight_bracket) break;
  }
  res.u_star = u;
  res.residual = e.phi - 1.0;
  ensure_finite(res.u_star, "solve_fixed_point u_star");
  if (std::abs(res.residual) > 10.0 * tol)
    throw Error("solve_fixed_point: residual failed to meet tolerance");
  return res;
}

ScalarCharacteristics scalar_characteristics(const CMatrix& a0, cplx z,
                                             double tol) {
  const auto n = static_cast<int>(a0.rows());
  CMatrix az = a0;
  if (az.rows() != az.cols() || n == 0)
    throw DomainError("scalar_characteristics: need a square matrix");
  az.diagonal().array() -= z;

  const SvdFactors f = svd_factors(az);
  ShiftedSpectrum sp;
  sp.z = z;
  sp.sigma.assign(f.sigma.data(), f.sigma.data() + f.sigma.size());

  ScalarCharacteristics out;
  out.z = z;
  out.criterion = support_criterion(sp);
  const FixedPointResult fp = solve_fixed_point(sp, tol);
  out.u_star = fp.u_star;
  out.u_star_sq = fp.u_star * fp.u_star;
  out.fixed_point_residual = fp.residual;
  out.in_bulk = true;

  // With A_z = U S V^H: G = U D U^H and G_* = V D V^H for
  // D_k = 1/(sigma_k^2 + u*^2); every trace reduces to sums over the
  // diagonal weights and the unitary overlap W = V^H U.
  Eigen::VectorXd d(n);
  for (int k = 0; k < n; ++k)
    d(k) = 1.0 / (sp.sigma[static_cast<std::size_t>(k)] *
                      sp.sigma[static_cast<std::size_t>(k)] +
                  out.u_star_sq);
  const CMatrix w = f.vt * f.u;

  const double dn = static_cast<double>(n);
  double g2 = 0.0;
  for (int k = 0; k < n; ++k) g2 += d(k) * d(k);
  g2 /= dn;

  cplx k_a = 0.0, h_a = 0.0;
  for (int k = 0; k < n; ++k) {
    const cplx diag = f.sigma(k) * w(k, k);
    k_a += diag * d(k);
    h_a += diag * d(k) * d(k);
  }
  k_a /= dn;
  h_a /= dn;

  cplx f_a = 0.0;
  double gg = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      f_a += f.sigma(j) * f.sigma(k) * d(j) * d(k) * w(j, k) * w(k, j);
      gg += d(j) * d(k) * std::norm(w(j, k));
    }
  f_a /= dn;
  gg /= dn;

  out.g2 = g2;
  out.k_a = k_a;
  out.h_a = h_a;
  out.f_a = f_a;
  out.gg_star = gg;
  out.rho = out.u_star_sq * gg + std::norm(h_a) / g2;
  out.c2 = 4.0 * out.u_star_sq * g2;
  ensure_finite(out.rho, "scalar_characteristics rho");
  if (!(out.rho > 0.0))
    throw Error("scalar_characteristics: rho must be positive");
  return out;
}

std::vector<ProfilePoint> saddle_profile(const ShiftedSpectrum& sp,
                                         std::span<const double> u_values) {
  if (sp.sigma.empty()) throw DomainError("saddle_profile: empty spectrum");
  const auto n = static_cast<double>(sp.sigma.size());
  std::vector<ProfilePoint> out;
  out.reserve(u_values.size());
  for (double u : u_values) {
    const double u2 = u * u;
    ProfilePoint p;
    p.u = u;
    double logs = 0.0, inv = 0.0, inv2 = 0.0;
    for (double sg : sp.sigma) {
      const double den = u2 + sg * sg;
      if (!(den > 0.0))
        throw DomainError(
            "saddle_profile: log argument vanishes (u = 0 with a zero "
            "singular value)");
      logs += std::log(den);
      inv += 1.0 / den;
      inv2 += 1.0 / (den * den);
    }
    const double phi = inv / n;
    p.f = logs / n - u2;
    p.df = 2.0 * u * (phi - 1.0);
    p.d2f = 2.0 * (phi - 1.0) - 4.0 * u2 * inv2 / n;
    out.push_back(p);
  }
  return out;
}

SupportScan support_boundary_scan(const CMatrix& a0, const ScanRegion& region,
                                  int refine_iters, int threads) {
  if (region.nx < 1 || region.ny < 1 || !(region.x_max > region.x_min) ||
      !(region.y_max > region.y_min))
    throw DomainError("support_boundary_scan: malformed region");

  SupportScan scan;
  scan.region = region;
  scan.field.resize(region.nx + 1, region.ny + 1);

  const auto value_at = [&](double x, double y) {
    return support_criterion(shifted_spectrum(a0, cplx(x, y)));
  };
  const auto node_x = [&](int ix) { return region.x_min + ix * region.dx(); };
  const auto node_y = [&](int iy) { return region.y_min + iy * region.dy(); };

  const std::size_t n_nodes =
      static_cast<std::size_t>(region.nx + 1) * (region.ny + 1);
  parallel_for_indexed(n_nodes, threads, [&](std::size_t idx) {
    const int ix = static_cast<int>(idx % (region.nx + 1));
    const int iy = static_cast<int>(idx / (region.nx + 1));
    scan.field(ix, iy) = value_at(node_x(ix), node_y(iy));
  });

  // Level-set value: criterion == 1. Infinite node values (zero singular
  // value) are simply "inside" and interpolate like a large finite level.
  const auto level = [&](int ix, int iy) {
    const double v = scan.field(ix, iy);
    return std::isinf(v) ? 1e6 : v - 1.0;
  };
  // Linear crossing between nodes a and b with values va > 0 >= vb or
  // va <= 0 < vb; optional bisection polish along the same edge.
  const auto crossing = [&](double ax, double ay, double va, double bx,
                            double by, double vb) -> std::array<double, 2> {
    double t = va / (va - vb);
    double x = ax + t * (bx - ax), y = ay + t * (by - ay);
    double lox = ax, loy = ay, vlo = va, hix = bx, hiy = by;
    for (int i = 0; i < refine_iters; ++i) {
      x = 0.5 * (lox + hix);
      y = 0.5 * (loy + hiy);
      const double vm = value_at(x, y) - 1.0;
      if ((vm > 0.0) == (vlo > 0.0)) {
        lox = x;
        loy = y;
        vlo = vm;
      } else {
        hix = x;
        hiy = y;
      }
    }
    if (refine_iters > 0) {
      x = 0.5 * (lox + hix);
      y = 0.5 * (loy + hiy);
    }
    return {x, y};
  };

  for (int iy = 0; iy < region.ny; ++iy) {
    for (int ix = 0; ix < region.nx; ++ix) {
      const double x0 = node_x(ix), x1 = node_x(ix + 1);
      const double y0 = node_y(iy), y1 = node_y(iy + 1);
      const double v00 = level(ix, iy), v10 = level(ix + 1, iy);
      const double v11 = level(ix + 1, iy + 1), v01 = level(ix, iy + 1);
      int mask = 0;
      if (v00 > 0.0) mask |= 1;
      if (v10 > 0.0) mask |= 2;
      if (v11 > 0.0) mask |= 4;
      if (v01 > 0.0) mask |= 8;
      if (mask == 0 || mask == 15) continue;

      // Edge crossing points (bottom, right, top, left), as needed.
      const auto bottom = [&] { return crossing(x0, y0, v00, x1, y0, v10); };
      const auto right = [&] { return crossing(x1, y0, v10, x1, y1, v11); };
      const auto top = [&] { return crossing(x0, y1, v01, x1, y1, v11); };
      const auto left = [&] { return crossing(x0, y0, v00, x0, y1, v01); };
      const auto emit = [&](const std::array<double, 2>& p,
                            const std::array<double, 2>& q) {
        scan.segments.push_back({p[0], p[1], q[0], q[1]});
      };

      switch (mask) {
        case 1:
        case 14:
          emit(left(), bottom());
          break;
        case 2:
        case 13:
          emit(bottom(), right());
          break;
        case 4:
        case 11:
          emit(right(), top());
          break;
        case 8:
        case 7:
          emit(top(), left());
          break;
        case 3:
        case 12:
          emit(left(), right());
          break;
        case 6:
        case 9:
          emit(bottom(), top());
          break;
        case 5:
        case 10: {
          // Saddle cell: resolve with the mean corner value.
          const double center = 0.25 * (v00 + v10 + v11 + v01);
          const bool same_as_00 = (center > 0.0) == (v00 > 0.0);
          if ((mask == 5) == same_as_00) {
            emit(left(), top());
            emit(bottom(), right());
          } else {
            emit(left(), bottom());
            emit(right(), top());
          }
          break;
        }
        default:
          break;
      }
    }
  }
  return scan;
}

AssumptionReport check_assumptions(const CMatrix& a0, cplx z, double eps,
                                   double norm_bound, double margin_required) {
  if (!(eps > 0.0)) throw DomainError("check_assumptions: eps must be > 0");
  AssumptionReport rep;
  rep.eps = eps;
  rep.norm_bound = norm_bound;
  rep.margin_required = margin_required;

  const auto n = static_cast<double>(a0.rows());
  rep.norm_sq_mean = a0.squaredNorm() / n;
  rep.norm_ok = rep.norm_sq_mean < norm_bound;

  const ShiftedSpectrum sp = shifted_spectrum(a0, z);
  double sum = 0.0;
  for (double s : sp.sigma) sum += 1.0 / (s * s + eps * eps);
  rep.resolvent_value = sum / n;
  rep.resolvent_margin = rep.resolvent_value - 1.0;
  rep.resolvent_ok = rep.resolvent_margin > margin_required;

  // Histogram of squared singular values: descriptive output only. The
  // weak-convergence hypothesis behind it concerns the n->infinity limit
  // and has no finite-n pass/fail meaning.
  const double max_l2 =
      sp.sigma.empty() ? 1.0 : sp.sigma.front() * sp.sigma.front();
  const int bins = 32;
  const double hi = std::max(1e-12, max_l2);
  rep.histogram_edges.resize(bins + 1);
  rep.histogram_counts.assign(bins, 0.0);
  for (int b = 0; b <= bins; ++b)
    rep.histogram_edges[static_cast<std::size_t>(b)] = hi * b / bins;
  for (double s : sp.sigma) {
    int b = static_cast<int>(std::floor(s * s / hi * bins));
    b = std::clamp(b, 0, bins - 1);
    rep.histogram_counts[static_cast<std::size_t>(b)] += 1.0;
  }
  rep.note =
      "squared-singular-value histogram is reported for inspection only; "
      "limit-distribution hypotheses are not assertable at finite n";
  return rep;
}

BulkPointCandidate pick_bulk_point(const CMatrix& a0, const ScanRegion& region,
                                   double eps, double margin_required,
                                   int threads) {
  // nx or ny may be 0 to scan a line (or a single point).
  const int nx = region.nx, ny = region.ny;
  const auto node = [&](int i, int cells, double lo, double hi) {
    return cells > 0 ? lo + i * (hi - lo) / cells : lo;
  };
  const std::size_t n_nodes = static_cast<std::size_t>(nx + 1) * (ny + 1);
  std::vector<double> criterion(n_nodes), margin(n_nodes);
  parallel_for_indexed(n_nodes, threads, [&](std::size_t idx) {
    const int ix = static_cast<int>(idx % (nx + 1));
    const int iy = static_cast<int>(idx / (nx + 1));
    const cplx z(node(ix, nx, region.x_min, region.x_max),
                 node(iy, ny, region.y_min, region.y_max));
    const ShiftedSpectrum sp = shifted_spectrum(a0, z);
    criterion[idx] = support_criterion(sp);
    double sum = 0.0;
    for (double s : sp.sigma) sum += 1.0 / (s * s + eps * eps);
    margin[idx] = sum / static_cast<double>(sp.sigma.size()) - 1.0;
  });

  BulkPointCandidate best;
  for (std::size_t idx = 0; idx < n_nodes; ++idx) {
    if (!(criterion[idx] > 1.0) || !(margin[idx] > margin_required)) continue;
    if (!best.ok || margin[idx] > best.margin) {
      const int ix = static_cast<int>(idx % (nx + 1));
      const int iy = static_cast<int>(idx / (nx + 1));
      best.ok = true;
      best.z = cplx(node(ix, nx, region.x_min, region.x_max),
                    node(iy, ny, region.y_min, region.y_max));
      best.criterion = criterion[idx];
      best.margin = margin[idx];
    }
  }
  return best;
}

}  // namespace ginlab
