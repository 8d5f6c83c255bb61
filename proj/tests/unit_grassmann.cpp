// Grassmann algebra engine: ring axioms, exp/inverse, Berezin integration.
//
// Hand-checked fixtures frozen below:
//  * theta_i theta_j = -theta_j theta_i, theta^2 = 0.
//  * With psi_bar = g0, psi = g1 and the differential order (g0, g1)
//    (leftmost acts first), int psi_bar psi d(order) = -1 and
//    int exp(-a psi_bar psi) d(order) = a.
//  * integrate over (g_k,...,g_1) of g_1...g_k extracts the coefficient.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "ginlab/errors.hpp"
#include "ginlab/grassmann.hpp"
#include "ginlab/philox.hpp"

using namespace ginlab;

namespace {

GrassmannElement random_element(int m, CounterRng& rng, bool with_body) {
  GrassmannElement x(m);
  const std::uint32_t top = 1u << m;
  for (std::uint32_t mask = 0; mask < top; ++mask) {
    x.set_coeff(mask, gcplx(rng.uniform_in(-1.0, 1.0),
                            rng.uniform_in(-1.0, 1.0)));
  }
  if (!with_body) x.set_coeff(0, 0.0);
  return x;
}

}  // namespace

TEST_CASE("generators anticommute and square to zero") {
  const int m = 4;
  for (int i = 0; i < m; ++i) {
    auto gi = GrassmannElement::generator(m, i);
    CHECK((gi * gi).max_abs_coeff() == 0.0);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      auto gj = GrassmannElement::generator(m, j);
      auto anti = gi * gj + gj * gi;
      CHECK(anti.max_abs_coeff() == 0.0);
    }
  }
}

TEST_CASE("canonical monomial sign bookkeeping") {
  // merge_sign counts transpositions needed to interleave two sorted masks.
  CHECK(merge_sign(0b0001, 0b0010) == 1);   // g0 * g1: already ordered
  CHECK(merge_sign(0b0010, 0b0001) == -1);  // g1 * g0 = -g0 g1
  CHECK(merge_sign(0b0101, 0b1010) == -1);  // (g0 g2)(g1 g3): one crossing
  CHECK(merge_sign(0b1010, 0b0101) == -1);  // three crossings

  const int m = 3;
  auto g0 = GrassmannElement::generator(m, 0);
  auto g1 = GrassmannElement::generator(m, 1);
  auto g2 = GrassmannElement::generator(m, 2);
  auto p = g2 * g0 * g1;  // = + g0 g1 g2 (cyclic: two transpositions)
  CHECK(p.coeff(0b111) == gcplx(1.0, 0.0));
  auto q = g1 * g0 * g2;  // one transposition
  CHECK(q.coeff(0b111) == gcplx(-1.0, 0.0));
}

TEST_CASE("ring axioms on random elements") {
  const int m = 6;
  CounterRng rng(/*seed=*/0xA1CE, /*stream=*/0);
  auto a = random_element(m, rng, true);
  auto b = random_element(m, rng, true);
  auto c = random_element(m, rng, true);

  auto assoc = (a * b) * c - a * (b * c);
  CHECK(assoc.max_abs_coeff() < 1e-12);
  auto dist = a * (b + c) - (a * b + a * c);
  CHECK(dist.max_abs_coeff() < 1e-12);

  // Scalars are central.
  auto s = GrassmannElement::scalar(m, gcplx(0.7, -0.3));
  CHECK((s * a - a * s).max_abs_coeff() < 1e-15);
}

TEST_CASE("exp terminates and satisfies the group law on commuting inputs") {
  const int m = 4;
  // Even elements built on disjoint generator pairs commute.
  auto g0 = GrassmannElement::generator(m, 0);
  auto g1 = GrassmannElement::generator(m, 1);
  auto g2 = GrassmannElement::generator(m, 2);
  auto g3 = GrassmannElement::generator(m, 3);
  auto x = gcplx(0.8, 0.1) * (g0 * g1);
  auto y = gcplx(-0.4, 0.6) * (g2 * g3);
  auto lhs = (x + y).exp();
  auto rhs = x.exp() * y.exp();
  CHECK(lhs.max_abs_diff(rhs) < 1e-14);

  // exp of a pure scalar is the scalar exponential.
  auto s = GrassmannElement::scalar(m, gcplx(1.2, -0.5)).exp();
  CHECK(std::abs(s.body() - std::exp(gcplx(1.2, -0.5))) < 1e-14);
  CHECK(s.min_degree() == 0);
  GrassmannElement nil_check = s;
  nil_check.set_coeff(0, 0.0);
  CHECK(nil_check.max_abs_coeff() == 0.0);

  // exp(x) * exp(-x) = 1 for a general element.
  CounterRng rng(0xB0B, 1);
  auto z = random_element(m, rng, true);
  auto prod = z.exp() * (gcplx(-1.0, 0.0) * z).exp();
  auto one = GrassmannElement::scalar(m, 1.0);
  CHECK(prod.max_abs_diff(one) < 1e-12);
}

TEST_CASE("inverse against multiplication") {
  const int m = 5;
  CounterRng rng(0xF00D, 2);
  auto x = random_element(m, rng, true);
  x.add_coeff(0, gcplx(2.0, 0.0));  // keep the body well away from zero
  auto one = GrassmannElement::scalar(m, 1.0);
  CHECK((x * x.inverse()).max_abs_diff(one) < 1e-12);
  CHECK((x.inverse() * x).max_abs_diff(one) < 1e-12);

  auto no_body = random_element(m, rng, false);
  CHECK_THROWS_AS(no_body.inverse(), DomainError);
}

TEST_CASE("berezin single steps and the pair convention") {
  const int m = 2;
  auto g0 = GrassmannElement::generator(m, 0);  // psi_bar
  auto g1 = GrassmannElement::generator(m, 1);  // psi

  // One step over g extracts the g-coefficient (after moving g rightmost).
  auto lin = gcplx(3.0, 0.0) * g0 + gcplx(5.0, 0.0) * g1 +
             GrassmannElement::scalar(m, 7.0);
  auto step = lin.integrate(0);
  CHECK(step.body() == gcplx(3.0, 0.0));
  CHECK(step.max_abs_coeff() == 3.0);

  // int psi_bar psi d(psi_bar) d(psi) = -1: leftmost differential first.
  const std::array<int, 2> order = {0, 1};
  auto val = (g0 * g1).integrate(order);
  CHECK(val.body() == gcplx(-1.0, 0.0));

  // int exp(-a psi_bar psi) over the same order = a.
  const gcplx a(1.7, 0.4);
  auto integrand = ((-a) * (g0 * g1)).exp();
  CHECK(std::abs(integrand.integrate(order).body() - a) < 1e-14);

  // Iterated integral equals the stepwise composition, leftmost first.
  CounterRng rng(0x5EED, 3);
  auto x = random_element(m, rng, true);
  CHECK(x.integrate(order).max_abs_diff(x.integrate(0).integrate(1)) == 0.0);
}

TEST_CASE("full top-coefficient extraction over descending order") {
  const int m = 4;
  CounterRng rng(0xCAFE, 4);
  auto x = random_element(m, rng, true);
  // Integrating over (g3, g2, g1, g0) returns the coefficient of
  // g0 g1 g2 g3 with + sign.
  const std::array<int, 4> order = {3, 2, 1, 0};
  auto val = x.integrate(order);
  CHECK(std::abs(val.body() - x.coeff(0b1111)) < 1e-15);
  GrassmannElement rest = val;
  rest.set_coeff(0, 0.0);
  CHECK(rest.max_abs_coeff() == 0.0);  // nothing but the scalar survives
}

TEST_CASE("grassmann gaussian produces the determinant up to 4x4") {
  // Generators interleaved as psi_bar_j = g(2j), psi_j = g(2j+1);
  // integrating exp(-sum A_jk psi_bar_j psi_k) over the pair order
  // (g0, g1, g2, g3, ...) yields det A.
  CounterRng rng(0xDE7, 5);
  for (int k = 1; k <= 4; ++k) {
    const int m = 2 * k;
    std::vector<std::vector<gcplx>> a(k, std::vector<gcplx>(k));
    GrassmannElement quad(m);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        a[i][j] = gcplx(rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0));
        if (i == j) a[i][j] += 1.5;
        auto mono = GrassmannElement::generator(m, 2 * i) *
                    GrassmannElement::generator(m, 2 * j + 1);
        quad += (-a[i][j]) * mono;
      }
    std::vector<int> order;
    for (int j = 0; j < k; ++j) {
      order.push_back(2 * j);
      order.push_back(2 * j + 1);
    }
    auto integral = quad.exp().integrate(order).body();

    // Reference determinant by Laplace expansion (k <= 4 keeps it cheap).
    std::function<gcplx(std::vector<std::vector<gcplx>>)> det =
        [&](std::vector<std::vector<gcplx>> mtx) -> gcplx {
      const int sz = static_cast<int>(mtx.size());
      if (sz == 1) return mtx[0][0];
      gcplx acc = 0.0;
      for (int c = 0; c < sz; ++c) {
        std::vector<std::vector<gcplx>> minor;
        for (int r = 1; r < sz; ++r) {
          std::vector<gcplx> row;
          for (int cc = 0; cc < sz; ++cc)
            if (cc != c) row.push_back(mtx[r][cc]);
          minor.push_back(row);
        }
        acc += ((c % 2 == 0) ? 1.0 : -1.0) * mtx[0][c] * det(minor);
      }
      return acc;
    };
    CHECK(std::abs(integral - det(a)) < 1e-12);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(GrassmannElement(21), DomainError);
  CHECK_THROWS_AS(GrassmannElement(-1), DomainError);
  CHECK_THROWS_AS(GrassmannElement::generator(3, 3), DomainError);
  GrassmannElement x(2);
  CHECK_THROWS_AS(x.integrate(5), DomainError);
  GrassmannElement other_rank(3);
  CHECK_THROWS_AS((x += other_rank), DomainError);
}
