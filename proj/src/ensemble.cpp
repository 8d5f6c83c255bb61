#include "ginlab/ensemble.hpp"

#include <cmath>
#include <sstream>

#include "ginlab/errors.hpp"
#include "ginlab/philox.hpp"

namespace ginlab {

namespace {

// Stream tag reserved for frozen deformation realizations, separate from
// the per-trial noise streams 0,1,2,...
constexpr std::uint64_t kRealizationStream = 0xD0F0'0000'0000'0001ull;

void require_positive(int n) {
  if (n < 1) throw DomainError("deformation size must be positive");
}

}  // namespace

std::string DeformationSpec::kind_name() const {
  switch (kind) {
    case DeformationKind::kZero:
      return "zero";
    case DeformationKind::kScalarShift:
      return "scalar_shift";
    case DeformationKind::kTwoAtomDiagonal:
      return "two_atom";
    case DeformationKind::kJordanBlock:
      return "jordan";
    case DeformationKind::kDiagonalList:
      return "diagonal";
    case DeformationKind::kIidRandom:
      return "iid_random";
  }
  return "unknown";
}

std::string DeformationSpec::describe() const {
  std::ostringstream os;
  os << kind_name();
  switch (kind) {
    case DeformationKind::kScalarShift:
    case DeformationKind::kTwoAtomDiagonal:
    case DeformationKind::kJordanBlock:
      os << "(a=" << a.real() << (a.imag() < 0 ? "-" : "+")
         << std::abs(a.imag()) << "i)";
      break;
    case DeformationKind::kDiagonalList:
      os << "(" << diagonal.size() << " entries)";
      break;
    case DeformationKind::kIidRandom:
      os << "(scale=" << scale << ", realize_seed=" << realize_seed << ")";
      break;
    default:
      break;
  }
  return os.str();
}

DeformationSpec parse_deformation_kind(const std::string& name) {
  DeformationSpec spec;
  if (name == "zero")
    spec.kind = DeformationKind::kZero;
  else if (name == "scalar_shift")
    spec.kind = DeformationKind::kScalarShift;
  else if (name == "two_atom")
    spec.kind = DeformationKind::kTwoAtomDiagonal;
  else if (name == "jordan")
    spec.kind = DeformationKind::kJordanBlock;
  else if (name == "diagonal")
    spec.kind = DeformationKind::kDiagonalList;
  else if (name == "iid_random")
    spec.kind = DeformationKind::kIidRandom;
  else
    throw UsageError("unknown deformation kind: " + name);
  return spec;
}

CMatrix realize_deformation(const DeformationSpec& spec, int n) {
  require_positive(n);
  CMatrix a0 = CMatrix::Zero(n, n);
  switch (spec.kind) {
    case DeformationKind::kZero:
      break;
    case DeformationKind::kScalarShift:
      a0.diagonal().setConstant(spec.a);
      break;
    case DeformationKind::kTwoAtomDiagonal: {
      const int half = n / 2;
      for (int i = 0; i < n; ++i) a0(i, i) = i < half ? spec.a : -spec.a;
      // Odd n: the middle entry joins the -a atom; closed forms assume even n.
      break;
    }
    case DeformationKind::kJordanBlock:
      a0.diagonal().setConstant(spec.a);
      for (int i = 0; i + 1 < n; ++i) a0(i, i + 1) = 1.0;
      break;
    case DeformationKind::kDiagonalList: {
      if (spec.diagonal.empty())
        throw UsageError("diagonal deformation needs at least one entry");
      for (int i = 0; i < n; ++i)
        a0(i, i) = spec.diagonal[static_cast<std::size_t>(i) %
                                 spec.diagonal.size()];
      break;
    }
    case DeformationKind::kIidRandom: {
      const double sigma = spec.scale / std::sqrt(2.0 * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          a0(i, j) = philox::complex_gaussian_at(
              spec.realize_seed, kRealizationStream,
              static_cast<std::uint64_t>(i) * n + j, sigma);
      break;
    }
  }
  return a0;
}

CMatrix sample_ginibre(int n, std::uint64_t seed, std::uint64_t trial) {
  require_positive(n);
  CMatrix h(n, n);
  const double sigma = 1.0 / std::sqrt(2.0 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h(i, j) = philox::complex_gaussian_at(
          seed, trial, static_cast<std::uint64_t>(i) * n + j, sigma);
  return h;
}

CMatrix sample_deformed(const DeformationSpec& spec, int n, std::uint64_t seed,
                        std::uint64_t trial) {
  CMatrix h = sample_ginibre(n, seed, trial);
  if (spec.kind != DeformationKind::kZero) h += realize_deformation(spec, n);
  return h;
}

}  // namespace ginlab
