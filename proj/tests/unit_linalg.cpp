#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "ginlab/linalg.hpp"
#include "ginlab/philox.hpp"

using namespace ginlab;

namespace {

CMatrix random_matrix(int n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = cplx(rng.uniform_in(-1, 1), rng.uniform_in(-1, 1));
  return a;
}

}  // namespace

TEST_CASE("eigenvalues of known matrices") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = cplx(2.0, 1.0);
  d(1, 1) = cplx(-1.0, 0.5);
  d(2, 2) = cplx(0.0, -3.0);
  auto ev = eigenvalues(d);
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  CHECK(std::abs(ev[0] - cplx(-1.0, 0.5)) < 1e-12);
  CHECK(std::abs(ev[1] - cplx(0.0, -3.0)) < 1e-12);
  CHECK(std::abs(ev[2] - cplx(2.0, 1.0)) < 1e-12);

  // Nilpotent single block: all eigenvalues zero.
  CMatrix nil = CMatrix::Zero(3, 3);
  nil(0, 1) = 1.0;
  nil(1, 2) = 1.0;
  for (const cplx& v : eigenvalues(nil)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("eigenvalue sum equals trace on random input") {
  const CMatrix a = random_matrix(30, 77);
  const auto ev = eigenvalues(a);
  cplx sum = 0.0;
  for (const cplx& v : ev) sum += v;
  CHECK(std::abs(sum - a.trace()) < 1e-10);
}

TEST_CASE("singular values are descending and Frobenius-consistent") {
  const CMatrix a = random_matrix(17, 5);
  const auto sv = singular_values(a);
  REQUIRE(sv.size() == 17);
  double frob = 0.0;
  for (std::size_t k = 0; k < sv.size(); ++k) {
    CHECK(sv[k] >= 0.0);
    if (k > 0) CHECK(sv[k] <= sv[k - 1]);
    frob += sv[k] * sv[k];
  }
  CHECK(frob == doctest::Approx(a.squaredNorm()).epsilon(1e-12));

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = cplx(0.0, 3.0);  // modulus 3
  d(1, 1) = 4.0;
  const auto s2 = singular_values(d);
  CHECK(s2[0] == doctest::Approx(4.0));
  CHECK(s2[1] == doctest::Approx(3.0));
}

TEST_CASE("svd factors reconstruct the matrix and are unitary") {
  const CMatrix a = random_matrix(12, 9);
  const SvdFactors f = svd_factors(a);
  CMatrix sigma = CMatrix::Zero(12, 12);
  for (int k = 0; k < 12; ++k) sigma(k, k) = f.sigma[k];
  CHECK((f.u * sigma * f.vt - a).norm() < 1e-12 * a.norm() * 12);
  CHECK((f.u.adjoint() * f.u - CMatrix::Identity(12, 12)).norm() < 1e-12);
  CHECK((f.vt * f.vt.adjoint() - CMatrix::Identity(12, 12)).norm() < 1e-12);
}
