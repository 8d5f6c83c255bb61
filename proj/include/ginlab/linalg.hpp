#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ginlab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// Eigenvalues of a general dense complex square matrix (no eigenvectors).
// Checks the eigenvalue-sum-vs-trace consistency of the decomposition and
// throws LinAlgError on solver failure or a gross mismatch.
std::vector<cplx> eigenvalues(CMatrix a);

// Singular values in descending order.
Eigen::VectorXd singular_values(CMatrix a);

// Full SVD a = u * diag(sigma) * vt, with vt the conjugate transpose of the
// right factor; sigma descending.
struct SvdFactors {
  CMatrix u;
  CMatrix vt;
  Eigen::VectorXd sigma;
};
SvdFactors svd_factors(CMatrix a);

}  // namespace ginlab
