#include "ginlab/localstats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ginlab/errors.hpp"
#include "ginlab/parallel.hpp"
#include "ginlab/stats.hpp"

namespace ginlab {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(const PairCorrConfig& cfg) {
  if (!(cfg.window_radius > 0.0) || !(cfg.bin_width > 0.0) ||
      !(cfg.r_max > 0.0))
    throw DomainError("pair_correlation: window, bins and r_max must be > 0");
  if (cfg.inner_margin < cfg.r_max)
    throw DomainError(
        "pair_correlation: inner margin must cover the largest bin radius "
        "(otherwise annuli poke outside the window)");
  if (cfg.inner_margin >= cfg.window_radius)
    throw DomainError("pair_correlation: eroded window is empty");
}

}  // namespace

Cloud rescale_cloud(std::span<const cplx> eigs, cplx z0, int n,
                    double window_radius) {
  if (n < 1) throw DomainError("rescale_cloud: n must be positive");
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  Cloud cloud;
  for (const cplx& lam : eigs) {
    const cplx zeta = sqrt_n * (lam - z0);
    if (std::abs(zeta) <= window_radius) cloud.points.push_back(zeta);
  }
  return cloud;
}

PairCorrResult pair_correlation(const std::vector<Cloud>& clouds,
                                const PairCorrConfig& cfg) {
  validate(cfg);
  const int trials = static_cast<int>(clouds.size());
  if (trials < 1) throw DomainError("pair_correlation: need >= 1 cloud");
  const int bins = static_cast<int>(std::ceil(cfg.r_max / cfg.bin_width));
  const double r_inner = cfg.window_radius - cfg.inner_margin;
  const double window_area = kPi * cfg.window_radius * cfg.window_radius;
  const double inner_r2 = r_inner * r_inner;

  // Per-trial additive pieces, kept for the jackknife.
  std::vector<double> n_window(static_cast<std::size_t>(trials), 0.0);
  std::vector<double> n_inner(static_cast<std::size_t>(trials), 0.0);
  std::vector<std::vector<double>> cnt(
      static_cast<std::size_t>(trials),
      std::vector<double>(static_cast<std::size_t>(bins), 0.0));

  for (int t = 0; t < trials; ++t) {
    const auto& pts = clouds[static_cast<std::size_t>(t)].points;
    n_window[static_cast<std::size_t>(t)] = static_cast<double>(pts.size());
    auto& c = cnt[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::norm(pts[i]) > inner_r2) continue;
      n_inner[static_cast<std::size_t>(t)] += 1.0;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == i) continue;
        const double r = std::abs(pts[i] - pts[j]);
        if (r >= cfg.r_max) continue;
        const int b = std::min(bins - 1,
                               static_cast<int>(std::floor(r / cfg.bin_width)));
        c[static_cast<std::size_t>(b)] += 1.0;
      }
    }
  }

  PairCorrResult out;
  out.trials = trials;
  const double t_d = static_cast<double>(trials);
  double tot_window = 0.0, tot_inner = 0.0;
  std::vector<double> tot_cnt(static_cast<std::size_t>(bins), 0.0);
  for (int t = 0; t < trials; ++t) {
    tot_window += n_window[static_cast<std::size_t>(t)];
    tot_inner += n_inner[static_cast<std::size_t>(t)];
    for (int b = 0; b < bins; ++b)
      tot_cnt[static_cast<std::size_t>(b)] +=
          cnt[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)];
  }
  out.density_hat = tot_window / (t_d * window_area);
  out.mean_window_count = tot_window / t_d;
  out.mean_inner_count = tot_inner / t_d;
  if (!(out.density_hat > 0.0) || !(out.mean_inner_count > 0.0))
    throw DomainError("pair_correlation: no points in (eroded) window");

  // g from aggregate pieces; the same formula serves the full estimate and
  // each leave-one-trial-out replicate.
  const auto g_from = [&](double window_sum, double inner_sum,
                          double count_sum, double t_eff, int b) {
    const double dens = window_sum / (t_eff * window_area);
    const double inner_mean = inner_sum / t_eff;
    const double r_lo = b * cfg.bin_width;
    const double r_hi = std::min(cfg.r_max, r_lo + cfg.bin_width);
    const double area = kPi * (r_hi * r_hi - r_lo * r_lo);
    const double norm = t_eff * inner_mean * dens * area;
    return norm > 0.0 ? count_sum / norm : 0.0;
  };

  for (int b = 0; b < bins; ++b) {
    const double r_lo = b * cfg.bin_width;
    const double r_hi = std::min(cfg.r_max, r_lo + cfg.bin_width);
    const double tot_b = tot_cnt[static_cast<std::size_t>(b)];
    out.r_lo.push_back(r_lo);
    out.r_hi.push_back(r_hi);
    out.r_mid.push_back(0.5 * (r_lo + r_hi));
    out.counts.push_back(static_cast<long long>(tot_b));
    out.g.push_back(g_from(tot_window, tot_inner, tot_b, t_d, b));

    if (trials < 2) {
      // A single cloud still yields the point estimate, but the
      // across-trial jackknife is degenerate; callers must treat the
      // zero standard errors as "unknown", not "exact".
      out.g_std_error.push_back(0.0);
      continue;
    }
    std::vector<double> loo(static_cast<std::size_t>(trials), 0.0);
    for (int t = 0; t < trials; ++t) {
      const auto ts = static_cast<std::size_t>(t);
      loo[ts] = g_from(tot_window - n_window[ts], tot_inner - n_inner[ts],
                       tot_b - cnt[ts][static_cast<std::size_t>(b)], t_d - 1.0,
                       b);
    }
    out.g_std_error.push_back(jackknife_std_error(loo));
  }
  return out;
}

double ginibre_pair_oracle(int n, cplx z0, double r) {
  if (n < 1) throw DomainError("ginibre_pair_oracle: n must be positive");
  if (std::abs(z0) > 0.9)
    throw DomainError(
        "ginibre_pair_oracle: z0 must sit well inside the unit disk");
  if (r < 0.0) throw DomainError("ginibre_pair_oracle: r must be >= 0");
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const cplx w1 = z0 + cplx(r / sqrt_n, 0.0);
  const cplx w2 = z0;

  // log of S(x) = sum_{k<n} x^k/k! via max-term scaling. Returns the log of
  // |S| and the scaled complex sum for phase-aware use; only moduli are
  // needed here.
  const auto log_abs_s = [n](cplx x) {
    if (std::abs(x) == 0.0) return 0.0;  // S = 1
    const double lax = std::log(std::abs(x));
    double m = 0.0;  // max over k of log |x^k/k!|
    for (int k = 1; k < n; ++k)
      m = std::max(m, k * lax - std::lgamma(static_cast<double>(k) + 1.0));
    const cplx logx(lax, std::arg(x));
    cplx sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx log_term = static_cast<double>(k) * logx -
                            std::lgamma(static_cast<double>(k) + 1.0) - m;
      sum += std::exp(log_term);
    }
    return m + std::log(std::abs(sum));
  };

  const double n_d = static_cast<double>(n);
  const double log_s12 = log_abs_s(n_d * w1 * std::conj(w2));
  const double log_s11 = log_abs_s(cplx(n_d * std::norm(w1), 0.0));
  const double log_s22 = log_abs_s(cplx(n_d * std::norm(w2), 0.0));
  const double ratio = std::exp(2.0 * log_s12 - log_s11 - log_s22);
  return 1.0 - ratio;
}

double universal_prediction(double rho, double r) {
  if (!(rho > 0.0)) throw DomainError("universal_prediction: rho must be > 0");
  return 1.0 - std::exp(-rho * r * r);
}

UniversalityReport universality_run(const DeformationSpec& spec, int n,
                                    cplx z0, int trials, std::uint64_t seed,
                                    const PairCorrConfig& cfg,
                                    double sup_r_max, double sup_tolerance,
                                    double density_tolerance, int threads) {
  validate(cfg);
  if (trials < 1) throw DomainError("universality_run: need >= 1 trial");

  UniversalityReport rep;
  const CMatrix a0 = realize_deformation(spec, n);
  // Refuses (throws OutsideBulkError) when z0 is not a bulk point.
  rep.equiv = scalar_characteristics(a0, z0);
  rep.sup_r_max = sup_r_max;
  rep.sup_tolerance = sup_tolerance;
  rep.density_tolerance = density_tolerance;

  std::vector<Cloud> clouds(static_cast<std::size_t>(trials));
  std::vector<char> failed(static_cast<std::size_t>(trials), 0);
  parallel_for_indexed(
      static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        try {
          const CMatrix h = sample_deformed(spec, n, seed, t);
          const std::vector<cplx> eigs = eigenvalues(h);
          clouds[t] = rescale_cloud(eigs, z0, n, cfg.window_radius);
        } catch (const LinAlgError&) {
          failed[t] = 1;
        }
      });
  std::vector<Cloud> kept;
  kept.reserve(clouds.size());
  for (std::size_t t = 0; t < clouds.size(); ++t) {
    if (failed[t])
      ++rep.failed_trials;
    else
      kept.push_back(std::move(clouds[t]));
  }
  rep.estimate = pair_correlation(kept, cfg);

  rep.sup_distance = 0.0;
  for (std::size_t b = 0; b < rep.estimate.r_mid.size(); ++b) {
    const double pred = universal_prediction(rep.equiv.rho,
                                             rep.estimate.r_mid[b]);
    rep.prediction.push_back(pred);
    const double se = rep.estimate.g_std_error[b];
    rep.z_scores.push_back(se > 0.0 ? (rep.estimate.g[b] - pred) / se : 0.0);
    if (rep.estimate.r_mid[b] <= sup_r_max)
      rep.sup_distance =
          std::max(rep.sup_distance, std::abs(rep.estimate.g[b] - pred));
  }
  rep.density_residual = std::abs(kPi * rep.estimate.density_hat -
                                  rep.equiv.rho);
  rep.sup_ok = rep.sup_distance < sup_tolerance;
  rep.density_ok = rep.density_residual < density_tolerance;
  return rep;
}

}  // namespace ginlab
