#include "ginlab/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

#include "ginlab/errors.hpp"

namespace ginlab {

namespace {

lapack_complex_double* lapack_ptr(CMatrix& m) {
  return reinterpret_cast<lapack_complex_double*>(m.data());
}

void require_square(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw DomainError(std::string(who) + ": need a nonempty square matrix");
}

}  // namespace

std::vector<cplx> eigenvalues(CMatrix a) {
  require_square(a, "eigenvalues");
  const auto n = static_cast<lapack_int>(a.rows());
  const cplx trace = a.trace();
  const double scale = std::max(1.0, a.norm());
  std::vector<cplx> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', n, lapack_ptr(a), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr,
      1);
  if (info != 0)
    throw LinAlgError("eigenvalues: zgeev failed with info=" +
                      std::to_string(info));
  cplx sum = 0.0;
  for (const cplx& v : w) sum += v;
  // Dense-solver consistency: the eigenvalue sum must reproduce the trace
  // up to rounding accumulated over n values.
  if (std::abs(sum - trace) > 1e-8 * static_cast<double>(n) * scale)
    throw LinAlgError("eigenvalues: eigenvalue sum inconsistent with trace");
  return w;
}

Eigen::VectorXd singular_values(CMatrix a) {
  require_square(a, "singular_values");
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd s(n);
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', n, n, lapack_ptr(a), n, s.data(),
                     nullptr, 1, nullptr, 1);
  if (info != 0)
    throw LinAlgError("singular_values: zgesdd failed with info=" +
                      std::to_string(info));
  return s;
}

SvdFactors svd_factors(CMatrix a) {
  require_square(a, "svd_factors");
  const auto n = static_cast<lapack_int>(a.rows());
  SvdFactors f;
  f.u.resize(n, n);
  f.vt.resize(n, n);
  f.sigma.resize(n);
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', n, n, lapack_ptr(a), n,
                     f.sigma.data(), lapack_ptr(f.u), n, lapack_ptr(f.vt), n);
  if (info != 0)
    throw LinAlgError("svd_factors: zgesdd failed with info=" +
                      std::to_string(info));
  return f;
}

}  // namespace ginlab
