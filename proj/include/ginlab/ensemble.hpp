#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ginlab/linalg.hpp"

namespace ginlab {

// Built-in deformation families for H = A0 + Ginibre noise.
enum class DeformationKind {
  kZero,             // A0 = 0
  kScalarShift,      // A0 = a * I
  kTwoAtomDiagonal,  // A0 = diag(a,...,a,-a,...,-a), first half +a
  kJordanBlock,      // a on the diagonal, 1 on the superdiagonal
  kDiagonalList,     // explicit diagonal entries, cycled to length n
  kIidRandom,        // entries iid complex Gaussian of scale/sqrt(n),
                     // realized once from a frozen seed
};

struct DeformationSpec {
  DeformationKind kind = DeformationKind::kZero;
  cplx a{0.0, 0.0};            // family parameter for shift/two-atom/Jordan
  std::vector<cplx> diagonal;  // kDiagonalList entries
  double scale = 1.0;          // kIidRandom entry scale
  std::uint64_t realize_seed = 1;  // kIidRandom frozen realization seed

  std::string kind_name() const;
  std::string describe() const;
};

DeformationSpec parse_deformation_kind(const std::string& name);

// Deterministic dense realization of the deformation at size n.
CMatrix realize_deformation(const DeformationSpec& spec, int n);

// One Ginibre noise matrix: entries have independent N(0, 1/(2n)) real and
// imaginary parts, addressed by (seed, trial, row-major position) so the
// draw is reproducible for any evaluation order or thread count.
CMatrix sample_ginibre(int n, std::uint64_t seed, std::uint64_t trial);

// H = A0 + Ginibre noise for the given trial.
CMatrix sample_deformed(const DeformationSpec& spec, int n, std::uint64_t seed,
                        std::uint64_t trial);

}  // namespace ginlab
