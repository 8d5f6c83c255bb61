#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ginlab/parallel.hpp"
#include "ginlab/philox.hpp"

using namespace ginlab;

TEST_CASE("block reproduces the published known-answer vectors") {
  // Counter and key all zero.
  {
    const auto x = philox::block(0, 0, 0);
    CHECK(x[0] == 0x6627e8d5u);
    CHECK(x[1] == 0xe169c58du);
    CHECK(x[2] == 0xbc57ac4cu);
    CHECK(x[3] == 0x9b00dbd8u);
  }
  // Counter and key all ones.
  {
    const std::uint64_t ff = 0xFFFFFFFFFFFFFFFFull;
    const auto x = philox::block(ff, ff, ff);
    CHECK(x[0] == 0x408f276du);
    CHECK(x[1] == 0x41c83b0eu);
    CHECK(x[2] == 0xa20bc7c6u);
    CHECK(x[3] == 0x6d5451fdu);
  }
  // Pi-digit counter and key.
  {
    const std::uint64_t position = (0x85a308d3ull << 32) | 0x243f6a88ull;
    const std::uint64_t stream = (0x03707344ull << 32) | 0x13198a2eull;
    const std::uint64_t seed = (0x299f31d0ull << 32) | 0xa4093822ull;
    const auto x = philox::block(seed, stream, position);
    CHECK(x[0] == 0xd16cfe09u);
    CHECK(x[1] == 0x94fdccebu);
    CHECK(x[2] == 0x5001e420u);
    CHECK(x[3] == 0x24126ea1u);
  }
}

TEST_CASE("uniform_open_closed maps to (0, 1] with exact endpoints") {
  CHECK(philox::uniform_open_closed(0u, 0u) == doctest::Approx(0x1.0p-53));
  CHECK(philox::uniform_open_closed(0xFFFFFFFFu, 0xFFFFFFFFu) == 1.0);
  CHECK(philox::uniform_open_closed(0u, 0u) > 0.0);
}

TEST_CASE("counter rng is a pure function of (seed, stream, position)") {
  CounterRng a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  CounterRng c(42, 8);
  bool any_different = false;
  CounterRng a2(42, 7);
  for (int i = 0; i < 16; ++i)
    if (a2.uniform() != c.uniform()) any_different = true;
  CHECK(any_different);

  const std::complex<double> g1 = philox::complex_gaussian_at(5, 3, 11, 0.5);
  const std::complex<double> g2 = philox::complex_gaussian_at(5, 3, 11, 0.5);
  CHECK(g1 == g2);
}

TEST_CASE("uniform and gaussian sample moments are in range") {
  const int n = 200000;
  CounterRng rng(2026, 1);
  double su = 0.0, sg = 0.0, sg2 = 0.0;
  for (int i = 0; i < n; ++i) {
    su += rng.uniform();
    const double g = rng.gaussian();
    sg += g;
    sg2 += g * g;
  }
  const double mu = su / n;
  const double mg = sg / n;
  const double vg = sg2 / n - mg * mg;
  CHECK(std::abs(mu - 0.5) < 4.0 * (1.0 / std::sqrt(12.0)) / std::sqrt(n));
  CHECK(std::abs(mg) < 4.0 / std::sqrt(n));
  CHECK(std::abs(vg - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("per-index draws are identical for any thread count") {
  const int count = 64;
  std::vector<std::array<std::uint32_t, 4>> serial(count), threaded(count);
  parallel_for_indexed(count, 1, [&](std::size_t i) {
    serial[i] = philox::block(9, i, 3);
  });
  parallel_for_indexed(count, 7, [&](std::size_t i) {
    threaded[i] = philox::block(9, i, 3);
  });
  for (int i = 0; i < count; ++i) CHECK(serial[i] == threaded[i]);
}

TEST_CASE("parallel_for_indexed propagates worker exceptions") {
  CHECK_THROWS_AS(
      parallel_for_indexed(16, 4,
                           [](std::size_t i) {
                             if (i == 11) throw std::runtime_error("boom");
                           }),
      std::runtime_error);
}
