#pragma once

#include <vector>

#include "ginlab/grassmann.hpp"
#include "ginlab/linalg.hpp"

namespace ginlab {

// Small dense matrix with Grassmann-algebra entries (shared generator set).
class GMatrix {
 public:
  GMatrix(int rows, int cols, int num_generators);
  static GMatrix identity(int n, int num_generators);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int num_generators() const { return m_; }
  GrassmannElement& at(int i, int j);
  const GrassmannElement& at(int i, int j) const;

  GMatrix operator*(const GMatrix& rhs) const;
  GMatrix operator+(const GMatrix& rhs) const;
  GMatrix operator-(const GMatrix& rhs) const;
  GMatrix scaled(gcplx s) const;

  // Numeric part (entrywise body).
  CMatrix body() const;
  // Zeroes every body, leaving the nilpotent part.
  GMatrix nilpotent_part() const;
  bool is_zero(double tol = 0.0) const;

  // Determinant by Leibniz expansion; valid because entries used here are
  // Grassmann-even (they commute). Supported up to 5x5.
  GrassmannElement det() const;
  GrassmannElement trace() const;

  // Inverse for a matrix whose body is invertible:
  // M = M0 (I + K), K nilpotent => M^-1 = (sum (-K)^j) M0^-1.
  GMatrix inverse() const;

  double max_abs_diff(const GMatrix& rhs) const;

 private:
  int rows_, cols_, m_;
  std::vector<GrassmannElement> e_;
};

// Embeds numerics into a GMatrix.
GMatrix to_gmatrix(const CMatrix& a, int num_generators);

// Block supermatrix [[a, chi], [eta, b]]: a is p-by-p and b is q-by-q with
// even entries; chi (p-by-q) and eta (q-by-p) carry odd entries.
struct SuperMatrix {
  int p = 0, q = 0;
  GMatrix a, b, chi, eta;

  SuperMatrix(int p_, int q_, int num_generators);
  int num_generators() const { return a.num_generators(); }
  static SuperMatrix identity(int p, int q, int num_generators);
  SuperMatrix operator*(const SuperMatrix& rhs) const;
};

// Superdeterminant det(a - chi b^-1 eta) / det(b); requires invertible
// bodies on both diagonal blocks.
GrassmannElement sdet(const SuperMatrix& f);
// Equivalent form det(a) / det(b - eta a^-1 chi), used for cross-checks.
GrassmannElement sdet_alt(const SuperMatrix& f);

// Supertrace tr(a) - tr(b).
GrassmannElement str(const SuperMatrix& f);

// str log F = log det a0 - log det b0 + str(Mercator series of F0^-1(F-F0)),
// where F0 is the numeric part. The series terminates by nilpotency. The
// additive split is valid at the supertrace level because the supertrace of
// a product is cyclic. exp(str_log(F)) reproduces sdet(F); principal-branch
// ambiguities of the numeric logs disappear under exp.
GrassmannElement str_log(const SuperMatrix& f);

}  // namespace ginlab
