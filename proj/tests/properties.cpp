// Statistical properties at moderate size: circular law, isotropy,
// estimator window independence, and the spectral gap of a strong
// deformation. Tolerances are multiples of conservative binomial errors;
// eigenvalue rigidity only shrinks the true fluctuations.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ginlab/detequiv.hpp"
#include "ginlab/ensemble.hpp"
#include "ginlab/linalg.hpp"
#include "ginlab/localstats.hpp"

using namespace ginlab;

TEST_CASE("circular law radial profile and isotropy") {
  const int n = 512;
  const int trials = 40;
  const std::uint64_t seed = 31415;

  long long inside_08 = 0, inside_unit_slack = 0, total = 0;
  long long quadrant[4] = {0, 0, 0, 0};
  long long window_total = 0;
  for (int t = 0; t < trials; ++t) {
    auto h = sample_ginibre(n, seed, static_cast<std::uint64_t>(t));
    auto eigs = eigenvalues(h);
    total += static_cast<long long>(eigs.size());
    for (cplx lam : eigs) {
      const double r = std::abs(lam);
      if (r <= 0.8) ++inside_08;
      if (r <= 1.05) ++inside_unit_slack;
    }
    auto cloud = rescale_cloud(eigs, cplx{0.0, 0.0}, n, 8.0);
    for (cplx zeta : cloud.points) {
      ++window_total;
      const int qx = zeta.real() >= 0.0 ? 1 : 0;
      const int qy = zeta.imag() >= 0.0 ? 1 : 0;
      ++quadrant[2 * qy + qx];
    }
  }

  // Uniform-on-the-disk radial law: P(|lambda| <= 0.8) = 0.64. Binomial
  // 3 sigma over 20480 draws is 0.010; allow another 0.010 for the finite-n
  // edge profile.
  const double frac08 = static_cast<double>(inside_08) / total;
  CHECK(std::abs(frac08 - 0.64) < 0.02);

  // Essentially all mass inside the (slightly slackened) unit disk.
  CHECK(static_cast<double>(inside_unit_slack) / total > 0.995);

  // Quadrants of the rescaled window are exchangeable by symmetry.
  REQUIRE(window_total > 2000);
  for (int q = 0; q < 4; ++q) {
    const double share = static_cast<double>(quadrant[q]) / window_total;
    CHECK(std::abs(share - 0.25) < 0.03);
  }
}

TEST_CASE("pair correlation is insensitive to the window size") {
  const int n = 256;
  const int trials = 150;
  const std::uint64_t seed = 2718;
  DeformationSpec spec;  // zero deformation

  std::vector<Cloud> wide(trials), narrow(trials);
  for (int t = 0; t < trials; ++t) {
    auto h = sample_deformed(spec, n, seed, static_cast<std::uint64_t>(t));
    auto eigs = eigenvalues(h);
    wide[t] = rescale_cloud(eigs, cplx{0.0, 0.0}, n, 8.0);
    narrow[t] = rescale_cloud(eigs, cplx{0.0, 0.0}, n, 6.0);
  }

  PairCorrConfig cw;
  cw.window_radius = 8.0;
  cw.inner_margin = 2.0;
  cw.bin_width = 0.25;
  cw.r_max = 2.0;
  PairCorrConfig cn = cw;
  cn.window_radius = 6.0;

  auto gw = pair_correlation(wide, cw);
  auto gn = pair_correlation(narrow, cn);
  REQUIRE(gw.g.size() == gn.g.size());
  for (size_t k = 0; k < gw.g.size(); ++k) {
    const double se =
        std::sqrt(gw.g_std_error[k] * gw.g_std_error[k] +
                  gn.g_std_error[k] * gn.g_std_error[k]);
    CHECK(std::abs(gw.g[k] - gn.g[k]) < 4.0 * se + 0.01);
  }
  CHECK(std::abs(gw.density_hat - gn.density_hat) < 0.02);

  // Both estimates track the limiting curve loosely at this budget.
  for (size_t k = 0; k < gw.g.size(); ++k) {
    const double pred = universal_prediction(1.0, gw.r_mid[k]);
    CHECK(std::abs(gw.g[k] - pred) < 5.0 * gw.g_std_error[k] + 0.02);
  }
}

TEST_CASE("strong two-atom deformation opens a spectral gap at the origin") {
  const double a = 1.5;
  const int n = 256;
  const int trials = 20;

  DeformationSpec spec = parse_deformation_kind("two_atom");
  spec.a = cplx{a, 0.0};
  auto a0 = realize_deformation(spec, n);

  // Deterministic prediction: the origin fails the bulk criterion.
  CHECK(!in_support(a0, cplx{0.0, 0.0}));
  CHECK(support_criterion(shifted_spectrum(a0, cplx{0.0, 0.0})) ==
        doctest::Approx(1.0 / (a * a)).epsilon(1e-12));
  // ... while the atoms themselves are inside.
  CHECK(in_support(a0, cplx{a, 0.0}));

  long long near_origin = 0, total = 0;
  for (int t = 0; t < trials; ++t) {
    auto h = sample_deformed(spec, n, 999, static_cast<std::uint64_t>(t));
    auto eigs = eigenvalues(h);
    total += static_cast<long long>(eigs.size());
    for (cplx lam : eigs)
      if (std::abs(lam) < 0.3) ++near_origin;
  }
  // The hole boundary sits near |z| = 0.56; |z| < 0.3 is deep inside it.
  CHECK(near_origin <= 2);
  CHECK(total == trials * n);
}
