// Rescaled clouds, pair-correlation estimator, and the finite-n oracle.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ginlab/errors.hpp"
#include "ginlab/localstats.hpp"
#include "ginlab/philox.hpp"

using namespace ginlab;

TEST_CASE("rescale_cloud maps and filters around z0") {
  const int n = 4;  // sqrt(n) = 2
  const cplx z0{0.5, -0.25};
  std::vector<cplx> zetas = {cplx{0.5, 0.0}, cplx{0.0, 3.9}, cplx{-4.1, 0.0},
                             cplx{2.0, 2.0}};
  std::vector<cplx> eigs;
  for (cplx zeta : zetas) eigs.push_back(z0 + zeta / 2.0);

  auto cloud = rescale_cloud(eigs, z0, n, /*window_radius=*/4.0);
  REQUIRE(cloud.points.size() == 3);  // |-4.1| > 4 dropped
  CHECK(std::abs(cloud.points[0] - zetas[0]) < 1e-12);
  CHECK(std::abs(cloud.points[1] - zetas[1]) < 1e-12);
  CHECK(std::abs(cloud.points[2] - zetas[3]) < 1e-12);
}

TEST_CASE("pair correlation rejects inconsistent configurations") {
  std::vector<Cloud> clouds(3);
  PairCorrConfig bad;
  bad.inner_margin = 2.0;
  bad.r_max = 4.0;  // annuli would leave the window
  CHECK_THROWS_AS(pair_correlation(clouds, bad), DomainError);

  PairCorrConfig neg;
  neg.bin_width = 0.0;
  CHECK_THROWS_AS(pair_correlation(clouds, neg), DomainError);

  PairCorrConfig tight;
  tight.window_radius = 3.0;
  tight.inner_margin = 4.0;  // erodes everything
  tight.r_max = 4.0;
  CHECK_THROWS_AS(pair_correlation(clouds, tight), DomainError);

  CHECK_THROWS_AS(pair_correlation(std::vector<Cloud>{}, PairCorrConfig{}),
                  DomainError);

  // All-empty clouds carry no density information at all.
  std::vector<Cloud> empty(5);
  CHECK_THROWS_AS(pair_correlation(empty, PairCorrConfig{}), DomainError);
}

TEST_CASE("single cloud with one pair counts exactly one ordered pair") {
  // First point inside the eroded window, second outside it (but inside the
  // full window) at distance 1: exactly one ordered pair falls in the bin
  // containing r = 1, and every count is hand-checkable.
  PairCorrConfig cfg;
  cfg.window_radius = 10.0;
  cfg.inner_margin = 5.0;
  cfg.bin_width = 0.5;
  cfg.r_max = 4.0;
  std::vector<Cloud> clouds(1);
  clouds[0].points = {cplx(4.7, 0.0), cplx(5.7, 0.0)};

  const PairCorrResult pc = pair_correlation(clouds, cfg);
  REQUIRE(pc.r_mid.size() == 8);
  for (std::size_t b = 0; b < pc.counts.size(); ++b) {
    CHECK(pc.counts[b] == (b == 2 ? 1 : 0));
    // Degenerate jackknife: a single trial reports zero standard error.
    CHECK(pc.g_std_error[b] == 0.0);
  }
  // density_hat = 2/(pi 100); N_in = 1; annulus area = pi(1.5^2 - 1^2);
  // g = 1 / (1 * 1 * density_hat * area) = 100 / 2.5 = 40.
  CHECK(pc.g[2] == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(pc.density_hat ==
        doctest::Approx(2.0 / (std::numbers::pi * 100.0)).epsilon(1e-12));
}

TEST_CASE("uniform points give a flat pair correlation and exact density") {
  // N points uniform in the window disk per trial: a binomial process with
  // g(r) = (N-1)/N for every r > 0 and density exactly N / (pi R^2).
  const int kN = 64;
  const int kTrials = 300;
  PairCorrConfig cfg;
  cfg.window_radius = 8.0;
  cfg.inner_margin = 4.0;
  cfg.bin_width = 0.25;
  cfg.r_max = 4.0;

  std::vector<Cloud> clouds(kTrials);
  CounterRng rng(/*seed=*/2024, /*stream=*/0);
  for (int t = 0; t < kTrials; ++t) {
    clouds[t].points.reserve(kN);
    for (int i = 0; i < kN; ++i) {
      const double r = cfg.window_radius * std::sqrt(rng.uniform());
      const double th = 2.0 * M_PI * rng.uniform();
      clouds[t].points.push_back(std::polar(r, th));
    }
  }

  auto res = pair_correlation(clouds, cfg);
  const double area = M_PI * cfg.window_radius * cfg.window_radius;
  CHECK(res.trials == kTrials);
  CHECK(res.density_hat == doctest::Approx(kN / area).epsilon(1e-12));
  CHECK(res.mean_window_count == doctest::Approx(kN).epsilon(1e-12));
  // Eroded disk has radius 4 => expected inner count N * (4/8)^2 = 16.
  CHECK(res.mean_inner_count ==
        doctest::Approx(kN / 4.0).epsilon(0.05));

  const double flat = (kN - 1.0) / kN;
  REQUIRE(!res.g.empty());
  REQUIRE(res.g.size() == res.r_mid.size());
  for (size_t k = 0; k < res.g.size(); ++k) {
    if (res.r_mid[k] < 0.5) continue;  // few pairs in the smallest annuli
    CHECK(std::abs(res.g[k] - flat) <
          doctest::Approx(5.0 * res.g_std_error[k] + 0.01));
    CHECK(res.g_std_error[k] > 0.0);
    CHECK(res.counts[k] > 0);
  }

  // Bin geometry: contiguous annuli of the configured width.
  for (size_t k = 0; k < res.r_lo.size(); ++k) {
    CHECK(res.r_hi[k] - res.r_lo[k] == doctest::Approx(cfg.bin_width));
    CHECK(res.r_mid[k] ==
          doctest::Approx(0.5 * (res.r_lo[k] + res.r_hi[k])));
    if (k > 0) CHECK(res.r_lo[k] == doctest::Approx(res.r_hi[k - 1]));
  }
  CHECK(res.r_hi.back() == doctest::Approx(cfg.r_max));
}

TEST_CASE("pairless clouds produce zeroed bins rather than NaNs") {
  // One isolated point per cloud: density is defined but every annulus
  // bin is empty.
  std::vector<Cloud> clouds(5);
  for (auto& c : clouds) c.points = {cplx{0.0, 0.0}};
  PairCorrConfig cfg;
  auto res = pair_correlation(clouds, cfg);
  const double area = M_PI * cfg.window_radius * cfg.window_radius;
  CHECK(res.density_hat == doctest::Approx(1.0 / area).epsilon(1e-12));
  for (size_t k = 0; k < res.g.size(); ++k) {
    CHECK(res.g[k] == 0.0);
    CHECK(res.counts[k] == 0);
    CHECK(std::isfinite(res.g_std_error[k]));
  }
}

TEST_CASE("finite-n oracle: exclusion at zero and limits") {
  CHECK(ginibre_pair_oracle(64, cplx{0.0, 0.0}, 0.0) == doctest::Approx(0.0));
  CHECK(ginibre_pair_oracle(256, cplx{0.3, 0.0}, 0.0) ==
        doctest::Approx(0.0));

  // Monotone increase from 0 toward 1 on the scale of one mean spacing.
  double prev = -1.0;
  for (double r : {0.0, 0.3, 0.6, 1.0, 1.5, 2.0, 2.5}) {
    const double g = ginibre_pair_oracle(64, cplx{0.0, 0.0}, r);
    CHECK(g >= prev);
    CHECK(g <= 1.0 + 1e-15);
    prev = g;
  }
  CHECK(prev > 0.99);

  // Away from the spectral edge the finite-n curve already sits on the
  // limiting prediction: the kernel-series truncation error is beyond
  // double precision for these (n, z0, r).
  for (double r : {0.3, 1.0, 2.0, 3.0}) {
    CHECK(ginibre_pair_oracle(64, cplx{0.0, 0.0}, r) ==
          doctest::Approx(universal_prediction(1.0, r)).epsilon(1e-10));
    CHECK(ginibre_pair_oracle(256, cplx{0.3, 0.0}, r) ==
          doctest::Approx(universal_prediction(1.0, r)).epsilon(1e-10));
  }

  CHECK_THROWS_AS(ginibre_pair_oracle(0, cplx{0.0, 0.0}, 1.0), DomainError);
  CHECK_THROWS_AS(ginibre_pair_oracle(16, cplx{0.95, 0.0}, 1.0), DomainError);
  CHECK_THROWS_AS(ginibre_pair_oracle(16, cplx{0.0, 0.0}, -1.0), DomainError);
}

TEST_CASE("universal prediction basic values") {
  CHECK(universal_prediction(1.0, 0.0) == 0.0);
  CHECK(universal_prediction(1.0, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(universal_prediction(0.75, 2.0) ==
        doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(universal_prediction(0.0, 1.0), DomainError);
}

TEST_CASE("universality run end-to-end smoke at small size") {
  PairCorrConfig cfg;
  cfg.window_radius = 6.0;
  cfg.inner_margin = 4.0;
  cfg.bin_width = 0.2;
  cfg.r_max = 2.0;
  auto rep = universality_run(DeformationSpec{}, /*n=*/48, cplx{0.0, 0.0},
                              /*trials=*/60, /*seed=*/9, cfg,
                              /*sup_r_max=*/2.0);
  CHECK(rep.equiv.rho == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.estimate.trials == 60);
  REQUIRE(rep.prediction.size() == rep.estimate.g.size());
  REQUIRE(rep.z_scores.size() == rep.estimate.g.size());
  for (size_t k = 0; k < rep.prediction.size(); ++k) {
    CHECK(rep.prediction[k] ==
          doctest::Approx(universal_prediction(1.0, rep.estimate.r_mid[k]))
              .epsilon(1e-12));
    CHECK(std::isfinite(rep.z_scores[k]));
  }
  CHECK(rep.sup_distance >= 0.0);
  CHECK(std::isfinite(rep.density_residual));
  CHECK(rep.failed_trials == 0);
  // Reproducibility across thread counts.
  auto rep4 = universality_run(DeformationSpec{}, 48, cplx{0.0, 0.0}, 60, 9,
                               cfg, 2.0, 0.05, 0.03, /*threads=*/4);
  CHECK(rep4.sup_distance == doctest::Approx(rep.sup_distance).epsilon(1e-12));
  CHECK(rep4.estimate.density_hat ==
        doctest::Approx(rep.estimate.density_hat).epsilon(1e-12));
}
