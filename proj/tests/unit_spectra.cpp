// Spectral counting identity, generating functional, and smoothing checks.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ginlab/ensemble.hpp"
#include "ginlab/linalg.hpp"
#include "ginlab/quadrature.hpp"
#include "ginlab/spectra.hpp"

using namespace ginlab;

TEST_CASE("smallest singular value matches the full decomposition") {
  auto h = sample_ginibre(12, /*seed=*/42, /*trial=*/0);
  const cplx z{0.2, -0.1};
  CMatrix shifted = h - z * CMatrix::Identity(12, 12);
  auto sv = singular_values(shifted);
  CHECK(smallest_singular_value(h, z) ==
        doctest::Approx(sv(sv.size() - 1)).epsilon(1e-12));

  // Hand-checkable fixtures.
  CHECK(smallest_singular_value(CMatrix::Identity(3, 3), cplx{1.0, 0.0}) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  CHECK(smallest_singular_value(d, cplx{0.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("radial bump: support, positivity, analytic laplacian") {
  RadialBump f;
  f.center = cplx{0.3, -0.2};
  f.radius = 0.7;

  CHECK(f.value(f.center) > 0.0);
  CHECK(f.value(f.center + cplx{0.7, 0.0}) == 0.0);
  CHECK(f.value(f.center + cplx{1.0, 1.0}) == 0.0);
  CHECK(f.laplacian(f.center + cplx{0.9, 0.0}) == 0.0);

  // Analytic Laplacian vs central finite differences inside the support.
  const double h = 1e-5;
  for (cplx p : {f.center + cplx{0.1, 0.05}, f.center + cplx{-0.3, 0.2},
                 f.center + cplx{0.0, 0.45}}) {
    const double fd =
        (f.value(p + cplx{h, 0}) + f.value(p - cplx{h, 0}) +
         f.value(p + cplx{0, h}) + f.value(p - cplx{0, h}) - 4.0 * f.value(p)) /
        (h * h);
    CHECK(f.laplacian(p) == doctest::Approx(fd).epsilon(1e-4));
  }

  // Radial symmetry of both value and Laplacian.
  const double r = 0.4;
  const double v0 = f.value(f.center + cplx{r, 0.0});
  const double l0 = f.laplacian(f.center + cplx{r, 0.0});
  for (double ang : {0.7, 2.1, 4.4}) {
    cplx p = f.center + std::polar(r, ang);
    CHECK(f.value(p) == doctest::Approx(v0).epsilon(1e-12));
    CHECK(f.laplacian(p) == doctest::Approx(l0).epsilon(1e-12));
  }
}

TEST_CASE("counting identity holds tightly for a small sample") {
  const int n = 12;
  auto h = sample_ginibre(n, /*seed=*/7, /*trial=*/5);
  auto eigs = eigenvalues(h);

  RadialBump f;
  f.center = cplx{0.1, 0.0};
  f.radius = 0.35;

  ScanRegion region;
  region.x_min = f.center.real() - f.radius;
  region.x_max = f.center.real() + f.radius;
  region.y_min = f.center.imag() - f.radius;
  region.y_max = f.center.imag() + f.radius;
  region.nx = 301;
  region.ny = 301;

  auto res = girko_identity_check(h, eigs, f, region);
  // Cells outside the bump support carry zero weight and are skipped:
  // the bump disk fills ~pi/4 of its bounding square.
  CHECK(res.evaluated_points > 0);
  CHECK(res.evaluated_points <= 301 * 301);
  CHECK(res.evaluated_points ==
        doctest::Approx(M_PI / 4.0 * 301 * 301).epsilon(0.01));
  CHECK(res.flagged_points == 0);
  // Measured 2.1e-5 for this frozen sample; the log-determinant kink at
  // each eigenvalue keeps midpoint error well above machine precision.
  CHECK(res.rel_err < 5e-4);
  CHECK(res.lhs == doctest::Approx(res.rhs).epsilon(5e-4));

  // Midpoint quadrature is second order: doubling the grid should shrink
  // the error by roughly 4 (allow a wide band).
  ScanRegion fine = region;
  fine.nx = 602;
  fine.ny = 602;
  auto res2 = girko_identity_check(h, eigs, f, fine);
  CHECK(res2.rel_err < res.rel_err);

  // The identity is invariant under the thread count.
  auto res4 = girko_identity_check(h, eigs, f, region, /*threads=*/4);
  CHECK(res4.rhs == doctest::Approx(res.rhs).epsilon(1e-13));
}

TEST_CASE("counting identity vanishes for a bump outside the cloud") {
  const int n = 12;
  auto h = sample_ginibre(n, /*seed=*/7, /*trial=*/5);
  auto eigs = eigenvalues(h);
  for (const cplx& ev : eigs) REQUIRE(std::abs(ev) < 2.0);

  RadialBump f;
  f.center = cplx{3.0, 0.0};  // far outside every eigenvalue
  f.radius = 0.4;
  ScanRegion region;
  region.x_min = f.center.real() - f.radius;
  region.x_max = f.center.real() + f.radius;
  region.y_min = f.center.imag() - f.radius;
  region.y_max = f.center.imag() + f.radius;
  region.nx = 201;
  region.ny = 201;

  auto res = girko_identity_check(h, eigs, f, region);
  CHECK(res.lhs == 0.0);  // no eigenvalue touches the support
  // The integrand is smooth here, so the quadrature residual is tiny.
  CHECK(std::abs(res.rhs) < 1e-3);
}

TEST_CASE("counting identity lhs counts only bump-weighted eigenvalues") {
  // A diagonal matrix with known eigenvalues: put one inside the bump.
  const int n = 3;
  CMatrix h = CMatrix::Zero(n, n);
  h(0, 0) = cplx{0.05, 0.0};   // inside
  h(1, 1) = cplx{2.0, 0.0};    // far outside
  h(2, 2) = cplx{-2.0, 1.0};   // far outside
  auto eigs = eigenvalues(h);

  RadialBump f;
  f.center = cplx{0.0, 0.0};
  f.radius = 0.3;

  double expected = 0.0;
  for (cplx lam : eigs) expected += f.value(lam);
  CHECK(expected > 0.0);

  ScanRegion region;
  region.x_min = -0.3;
  region.x_max = 0.3;
  region.y_min = -0.3;
  region.y_max = 0.3;
  region.nx = 401;
  region.ny = 401;
  auto res = girko_identity_check(h, eigs, f, region);
  CHECK(res.lhs == doctest::Approx(expected).epsilon(1e-12));
  CHECK(res.rhs == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("generating functional is exactly one for identical insertions") {
  GeneratingFunctionalParams p;
  p.z0 = cplx{0.2, 0.1};
  p.zeta = {cplx{0.3, -0.2}, cplx{-0.5, 0.0}};
  p.zeta_prime = p.zeta;
  p.eps = {0.7, 0.7};
  p.eps_prime = 0.7;

  auto res = generating_functional_mc(DeformationSpec{}, 16, p,
                                      /*trials=*/25, /*seed=*/11);
  CHECK(res.trials == 25);
  CHECK(res.failed_trials == 0);
  CHECK(res.estimate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.std_error < 1e-12);
  CHECK(res.log_mean == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("generating functional is symmetric under swapping the insertions") {
  GeneratingFunctionalParams p;
  p.z0 = cplx{0.1, -0.2};
  p.zeta = {cplx{0.4, 0.3}, cplx{-0.6, 0.1}};
  p.zeta_prime = {cplx{0.0, 0.0}, cplx{0.2, -0.1}};
  p.eps = {0.9, 1.4};
  p.eps_prime = 1.1;

  GeneratingFunctionalParams q = p;
  std::swap(q.zeta[0], q.zeta[1]);
  std::swap(q.eps[0], q.eps[1]);

  // The per-trial integrand is a product over the two insertions, so the
  // swap changes nothing; with identical draws the estimates are identical.
  const auto a = generating_functional_mc(DeformationSpec{}, 12, p,
                                          /*trials=*/30, /*seed=*/21);
  const auto b = generating_functional_mc(DeformationSpec{}, 12, q,
                                          /*trials=*/30, /*seed=*/21);
  CHECK(a.estimate == doctest::Approx(b.estimate).epsilon(1e-12));
  CHECK(a.std_error == doctest::Approx(b.std_error).epsilon(1e-9));
}

TEST_CASE("generating functional at n=1 matches direct gaussian quadrature") {
  // With the zero deformation and n = 1, H is a single complex Gaussian
  // entry h with density exp(-|h|^2)/pi, and the functional reduces to
  //   E[ (|h-w1|^2+e1^2)(|h-w2|^2+e2^2) / ((|h-w1'|^2+e'^2)(|h-w2'|^2+e'^2)) ]
  // with w_j = z0 + zeta_j (no 1/sqrt(n) scaling at n = 1).
  GeneratingFunctionalParams p;
  p.z0 = cplx{0.1, 0.0};
  p.zeta = {cplx{0.4, 0.3}, cplx{-0.2, 0.1}};
  p.zeta_prime = {cplx{0.0, 0.0}, cplx{0.5, -0.5}};
  p.eps = {0.9, 1.1};
  p.eps_prime = 1.0;

  auto w = [&](cplx zeta) { return p.z0 + zeta; };
  auto integrand = [&](double x, double y) {
    const cplx h{x, y};
    const double num = (std::norm(h - w(p.zeta[0])) + p.eps[0] * p.eps[0]) *
                       (std::norm(h - w(p.zeta[1])) + p.eps[1] * p.eps[1]);
    const double den =
        (std::norm(h - w(p.zeta_prime[0])) + p.eps_prime * p.eps_prime) *
        (std::norm(h - w(p.zeta_prime[1])) + p.eps_prime * p.eps_prime);
    return num / den * std::exp(-x * x - y * y) / M_PI;
  };
  const double exact =
      integrate_2d(integrand, -9.0, 9.0, -9.0, 9.0, 240, 240);

  auto res = generating_functional_mc(DeformationSpec{}, 1, p,
                               /*trials=*/60000, /*seed=*/5);
  CHECK(res.failed_trials == 0);
  const double band = 3.0 * res.std_error + 1e-9;
  CHECK(std::abs(res.estimate - exact) < band);
  CHECK(res.std_error > 0.0);
}

TEST_CASE("generating functional is reproducible and thread-invariant") {
  GeneratingFunctionalParams p;
  p.z0 = cplx{0.0, 0.0};
  p.zeta = {cplx{0.5, 0.0}, cplx{0.0, 0.5}};
  p.zeta_prime = {cplx{0.1, 0.1}, cplx{-0.1, 0.2}};
  p.eps = {1.0, 1.2};
  p.eps_prime = 0.8;
  auto a = generating_functional_mc(DeformationSpec{}, 8, p, 50, 99);
  auto b = generating_functional_mc(DeformationSpec{}, 8, p, 50, 99);
  auto c = generating_functional_mc(DeformationSpec{}, 8, p, 50, 99,
                                    /*threads=*/4);
  CHECK(a.estimate == b.estimate);
  CHECK(a.estimate == doctest::Approx(c.estimate).epsilon(1e-12));
  auto d = generating_functional_mc(DeformationSpec{}, 8, p, 50, 100);
  CHECK(a.estimate != d.estimate);
}

TEST_CASE("log-det smoothing check reports a full ladder") {
  std::vector<double> ladder = {0.8, 0.4, 0.2, 0.1};
  auto res = logdet_smoothing_check(DeformationSpec{}, 24,
                                    cplx{0.2, 0.0}, cplx{-0.1, 0.1}, ladder,
                                    /*trials=*/160, /*seed=*/21);
  REQUIRE(res.eps.size() == ladder.size());
  REQUIRE(res.delta.size() == ladder.size());
  REQUIRE(res.bound_ratio.size() == ladder.size());
  REQUIRE(res.bound_ratio_std_error.size() == ladder.size());
  for (size_t i = 0; i < ladder.size(); ++i) {
    CHECK(res.eps[i] == ladder[i]);
    CHECK(res.delta[i] >= 0.0);
    CHECK(std::isfinite(res.bound_ratio[i]));
    CHECK(res.bound_ratio_std_error[i] >= 0.0);
    CHECK(res.bound_ratio[i] ==
          doctest::Approx(res.delta[i] / (ladder[i] * ladder[i]))
              .epsilon(1e-12));
  }
  CHECK(std::isfinite(res.slope));
  CHECK(res.slope_std_error > 0.0);
  CHECK(res.trials == 160);
}
