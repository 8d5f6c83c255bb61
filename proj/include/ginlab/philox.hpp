#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace ginlab {

// Counter-based pseudo-random generator (Philox4x32-10).
//
// A block of four 32-bit words is a pure function of (seed, stream,
// position). Streams index independent sequences (one per Monte Carlo
// trial), so sampled data never depend on evaluation order or thread count.
namespace philox {

inline constexpr std::uint32_t kKeyWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kKeyWeyl1 = 0xBB67AE85u;
inline constexpr std::uint32_t kMult0 = 0xD2511F53u;
inline constexpr std::uint32_t kMult1 = 0xCD9E8D57u;

inline void round_once(std::array<std::uint32_t, 4>& x,
                       const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * x[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * x[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  x = {hi1 ^ x[1] ^ key[0], lo1, hi0 ^ x[3] ^ key[1], lo0};
}

// Ten rounds, key raised between consecutive rounds.
inline std::array<std::uint32_t, 4> block(std::uint64_t seed,
                                          std::uint64_t stream,
                                          std::uint64_t position) {
  std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                      static_cast<std::uint32_t>(seed >> 32)};
  std::array<std::uint32_t, 4> x = {static_cast<std::uint32_t>(position),
                                    static_cast<std::uint32_t>(position >> 32),
                                    static_cast<std::uint32_t>(stream),
                                    static_cast<std::uint32_t>(stream >> 32)};
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kKeyWeyl0;
      key[1] += kKeyWeyl1;
    }
    round_once(x, key);
  }
  return x;
}

// Uniform double in (0, 1]: never zero, safe under log().
inline double uniform_open_closed(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t u = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>((u >> 11) + 1) * 0x1.0p-53;
}

// Two independent N(0,1) draws from one block (Box-Muller).
inline std::array<double, 2> gaussian_pair(std::uint64_t seed,
                                           std::uint64_t stream,
                                           std::uint64_t position) {
  const auto x = block(seed, stream, position);
  const double u1 = uniform_open_closed(x[0], x[1]);
  const double u2 = uniform_open_closed(x[2], x[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

// Standard complex Gaussian with independent N(0, sigma^2) real and
// imaginary parts, addressable by position for order-free matrix fills.
inline std::complex<double> complex_gaussian_at(std::uint64_t seed,
                                                std::uint64_t stream,
                                                std::uint64_t position,
                                                double sigma) {
  const auto g = gaussian_pair(seed, stream, position);
  return {sigma * g[0], sigma * g[1]};
}

}  // namespace philox

// Sequential convenience view over one (seed, stream) pair.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  // Uniform in (0, 1].
  double uniform() {
    if (avail_ == 0) {
      buf_ = philox::block(seed_, stream_, position_++);
      avail_ = 2;
    }
    --avail_;
    const int base = avail_ == 1 ? 0 : 2;
    return philox::uniform_open_closed(buf_[base], buf_[base + 1]);
  }

  double uniform_in(double a, double b) { return a + (b - a) * uniform(); }

  // N(0,1).
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
  }

  std::complex<double> complex_gaussian(double sigma) {
    const double re = gaussian();
    const double im = gaussian();
    return {sigma * re, sigma * im};
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int avail_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace ginlab
