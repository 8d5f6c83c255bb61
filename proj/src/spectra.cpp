#include "ginlab/spectra.hpp"

#include <cmath>
#include <numbers>

#include "ginlab/errors.hpp"
#include "ginlab/parallel.hpp"
#include "ginlab/stats.hpp"

namespace ginlab {

namespace {

// Floor keeps log of an exactly singular point finite; floored evaluations
// are reported, not hidden.
constexpr double kSigmaFloor = 1e-300;

// log det Y(z) = 2 sum_k log sigma_k(H - z); returns the flag count bumped
// when a singular value hit the floor.
double log_det_y(const CMatrix& h, cplx z, int* flagged) {
  CMatrix hz = h;
  hz.diagonal().array() -= z;
  const Eigen::VectorXd s = singular_values(hz);
  double sum = 0.0;
  bool hit = false;
  for (int k = 0; k < s.size(); ++k) {
    const double sk = s(k);
    if (sk < kSigmaFloor) hit = true;
    sum += std::log(std::max(sk, kSigmaFloor));
  }
  if (hit && flagged != nullptr) ++(*flagged);
  return 2.0 * sum;
}

}  // namespace

double smallest_singular_value(const CMatrix& h, cplx z) {
  CMatrix hz = h;
  hz.diagonal().array() -= z;
  const Eigen::VectorXd s = singular_values(hz);
  return s(s.size() - 1);
}

double RadialBump::value(cplx z) const {
  const double s = std::norm(z - center) / (radius * radius);
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s));
}

double RadialBump::laplacian(cplx z) const {
  // For f = g(s), s = |z-center|^2/r^2, the 2D Laplacian is
  // (4/r^2) (s g''(s) + g'(s)) with g(s) = exp(1 - 1/(1-s)):
  //   g'  = -g/(1-s)^2,   g'' = g (2s-1)/(1-s)^4.
  const double s = std::norm(z - center) / (radius * radius);
  // Within ~1e-8 of the support edge the profile underflows to zero long
  // before the rational factors blow up.
  if (s >= 1.0 - 1e-8) return 0.0;
  const double one_minus = 1.0 - s;
  const double g = std::exp(1.0 - 1.0 / one_minus);
  const double term =
      s * (2.0 * s - 1.0) / (one_minus * one_minus * one_minus * one_minus) -
      1.0 / (one_minus * one_minus);
  return 4.0 / (radius * radius) * g * term;
}

CountingIdentityResult girko_identity_check(const CMatrix& h,
                                            std::span<const cplx> eigs,
                                            const RadialBump& f,
                                            const ScanRegion& region,
                                            int threads) {
  if (region.nx < 1 || region.ny < 1)
    throw DomainError("girko_identity_check: malformed grid");
  CountingIdentityResult out;
  for (const cplx& lam : eigs) out.lhs += f.value(lam);

  const double dx = region.dx(), dy = region.dy();
  // Midpoint rule over cells; only cells inside the bump support carry a
  // nonzero Laplacian, so log det Y is evaluated only there.
  std::vector<double> row_sums(static_cast<std::size_t>(region.ny), 0.0);
  std::vector<int> row_flags(static_cast<std::size_t>(region.ny), 0);
  std::vector<int> row_evals(static_cast<std::size_t>(region.ny), 0);
  parallel_for_indexed(
      static_cast<std::size_t>(region.ny), threads, [&](std::size_t iy) {
        double acc = 0.0;
        int flagged = 0, evals = 0;
        const double y = region.y_min + (static_cast<double>(iy) + 0.5) * dy;
        for (int ix = 0; ix < region.nx; ++ix) {
          const double x = region.x_min + (ix + 0.5) * dx;
          const cplx z(x, y);
          const double lap = f.laplacian(z);
          if (lap == 0.0) continue;
          ++evals;
          acc += lap * log_det_y(h, z, &flagged);
        }
        row_sums[iy] = acc;
        row_flags[iy] = flagged;
        row_evals[iy] = evals;
      });
  double total = 0.0;
  for (std::size_t iy = 0; iy < row_sums.size(); ++iy) {
    total += row_sums[iy];
    out.flagged_points += row_flags[iy];
    out.evaluated_points += row_evals[iy];
  }
  out.rhs = total * dx * dy / (4.0 * std::numbers::pi);
  out.rel_err = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1e-300);
  return out;
}

GeneratingFunctionalResult generating_functional_mc(
    const DeformationSpec& spec, int n, const GeneratingFunctionalParams& p,
    int trials, std::uint64_t seed, int threads) {
  if (trials < 2)
    throw DomainError("generating_functional_mc: need at least two trials");
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const std::array<cplx, 2> z_num = {p.z0 + p.zeta[0] / sqrt_n,
                                     p.z0 + p.zeta[1] / sqrt_n};
  const std::array<cplx, 2> z_den = {p.z0 + p.zeta_prime[0] / sqrt_n,
                                     p.z0 + p.zeta_prime[1] / sqrt_n};
  const std::array<double, 2> reg_num = {
      (p.eps[0] / n) * (p.eps[0] / n), (p.eps[1] / n) * (p.eps[1] / n)};
  const double reg_den = (p.eps_prime / n) * (p.eps_prime / n);

  const auto log_det_reg = [&](const CMatrix& h, cplx z, double reg) {
    CMatrix hz = h;
    hz.diagonal().array() -= z;
    const Eigen::VectorXd s = singular_values(hz);
    double sum = 0.0;
    for (int k = 0; k < s.size(); ++k) sum += std::log(s(k) * s(k) + reg);
    return sum;
  };

  std::vector<double> log_ratio(static_cast<std::size_t>(trials), 0.0);
  std::vector<char> failed(static_cast<std::size_t>(trials), 0);
  parallel_for_indexed(
      static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        try {
          const CMatrix h = sample_deformed(spec, n, seed, t);
          double lr = 0.0;
          for (int j = 0; j < 2; ++j) {
            lr += log_det_reg(h, z_num[static_cast<std::size_t>(j)],
                              reg_num[static_cast<std::size_t>(j)]);
            lr -= log_det_reg(h, z_den[static_cast<std::size_t>(j)], reg_den);
          }
          log_ratio[t] = lr;
        } catch (const LinAlgError&) {
          failed[t] = 1;
        }
      });

  std::vector<double> kept;
  kept.reserve(log_ratio.size());
  GeneratingFunctionalResult out;
  for (std::size_t t = 0; t < log_ratio.size(); ++t) {
    if (failed[t])
      ++out.failed_trials;
    else
      kept.push_back(log_ratio[t]);
  }
  if (kept.size() < 2)
    throw Error("generating_functional_mc: too many failed trials");
  const LogSpaceMean m = mean_of_exponentials(kept);
  out.estimate = m.mean;
  out.std_error = m.std_error;
  out.log_mean = m.log_mean;
  out.rel_std_error = m.rel_std_error;
  out.trials = static_cast<int>(kept.size());
  return out;
}

SmoothingCheckResult logdet_smoothing_check(const DeformationSpec& spec, int n,
                                            cplx z1, cplx z2,
                                            std::span<const double> eps_ladder,
                                            int trials, std::uint64_t seed,
                                            int threads) {
  if (eps_ladder.size() < 2)
    throw DomainError("logdet_smoothing_check: need an eps ladder");
  if (trials < 2)
    throw DomainError("logdet_smoothing_check: need at least two trials");
  const std::size_t rungs = eps_ladder.size();

  // Per trial: one pair of SVDs serves the exact product and every rung
  // (maximal pairing, so the difference has low variance).
  std::vector<std::vector<double>> diffs(
      rungs, std::vector<double>(static_cast<std::size_t>(trials), 0.0));
  parallel_for_indexed(
      static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        const CMatrix h = sample_deformed(spec, n, seed, t);
        CMatrix h1 = h, h2 = h;
        h1.diagonal().array() -= z1;
        h2.diagonal().array() -= z2;
        const Eigen::VectorXd s1 = singular_values(h1);
        const Eigen::VectorXd s2 = singular_values(h2);
        const auto logdet = [](const Eigen::VectorXd& s, double reg) {
          double sum = 0.0;
          for (int k = 0; k < s.size(); ++k) {
            const double s2k = s(k) * s(k) + reg;
            sum += std::log(std::max(s2k, kSigmaFloor));
          }
          return sum;
        };
        const double a = logdet(s1, 0.0);
        const double b = logdet(s2, 0.0);
        for (std::size_t r = 0; r < rungs; ++r) {
          const double reg = (eps_ladder[r] / n) * (eps_ladder[r] / n);
          const double a_eps = logdet(s1, reg);
          const double b_eps = logdet(s2, reg);
          diffs[r][t] = (a - a_eps) * (b - b_eps);
        }
      });

  SmoothingCheckResult out;
  out.trials = trials;
  std::vector<double> x(rungs), ratio(rungs), ratio_se(rungs);
  for (std::size_t r = 0; r < rungs; ++r) {
    const double eps = eps_ladder[r];
    const double m = mean(diffs[r]);
    const double se = std_error_of_mean(diffs[r]);
    out.eps.push_back(eps);
    out.delta.push_back(std::abs(m));
    out.delta_std_error.push_back(se);
    ratio[r] = std::abs(m) / (eps * eps);
    ratio_se[r] = se / (eps * eps);
    out.bound_ratio.push_back(ratio[r]);
    out.bound_ratio_std_error.push_back(ratio_se[r]);
    x[r] = static_cast<double>(r);  // rung index, eps decreasing
  }
  const SlopeFit fit = fit_slope(x, ratio, ratio_se);
  out.slope = fit.slope;
  out.slope_std_error = fit.slope_std_error;
  out.nonincreasing_within_2se = fit.slope <= 2.0 * fit.slope_std_error;
  return out;
}

}  // namespace ginlab
