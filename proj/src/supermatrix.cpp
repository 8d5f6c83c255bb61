#include "ginlab/supermatrix.hpp"

#include <algorithm>
#include <cmath>

#include "ginlab/errors.hpp"

namespace ginlab {

namespace {

void require_same_shape(const GMatrix& a, const GMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() ||
      a.num_generators() != b.num_generators())
    throw DomainError("gmatrix: shape or algebra mismatch");
}

// Full block matrix [[a, chi], [eta, b]] for products and series.
GMatrix assemble(const SuperMatrix& f) {
  const int n = f.p + f.q;
  GMatrix m(n, n, f.num_generators());
  for (int i = 0; i < f.p; ++i)
    for (int j = 0; j < f.p; ++j) m.at(i, j) = f.a.at(i, j);
  for (int i = 0; i < f.p; ++i)
    for (int j = 0; j < f.q; ++j) m.at(i, f.p + j) = f.chi.at(i, j);
  for (int i = 0; i < f.q; ++i)
    for (int j = 0; j < f.p; ++j) m.at(f.p + i, j) = f.eta.at(i, j);
  for (int i = 0; i < f.q; ++i)
    for (int j = 0; j < f.q; ++j) m.at(f.p + i, f.p + j) = f.b.at(i, j);
  return m;
}

SuperMatrix split(const GMatrix& m, int p, int q) {
  SuperMatrix f(p, q, m.num_generators());
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) f.a.at(i, j) = m.at(i, j);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) f.chi.at(i, j) = m.at(i, p + j);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < p; ++j) f.eta.at(i, j) = m.at(p + i, j);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) f.b.at(i, j) = m.at(p + i, p + j);
  return f;
}

}  // namespace

GMatrix::GMatrix(int rows, int cols, int num_generators)
    : rows_(rows),
      cols_(cols),
      m_(num_generators),
      e_(static_cast<std::size_t>(rows) * cols,
         GrassmannElement(num_generators)) {
  if (rows < 1 || cols < 1) throw DomainError("gmatrix: empty shape");
}

GMatrix GMatrix::identity(int n, int num_generators) {
  GMatrix m(n, n, num_generators);
  for (int i = 0; i < n; ++i)
    m.at(i, i) = GrassmannElement::scalar(num_generators, 1.0);
  return m;
}

GrassmannElement& GMatrix::at(int i, int j) {
  return e_[static_cast<std::size_t>(i) * cols_ + j];
}

const GrassmannElement& GMatrix::at(int i, int j) const {
  return e_[static_cast<std::size_t>(i) * cols_ + j];
}

GMatrix GMatrix::operator*(const GMatrix& rhs) const {
  if (cols_ != rhs.rows_ || m_ != rhs.m_)
    throw DomainError("gmatrix: product shape mismatch");
  GMatrix out(rows_, rhs.cols_, m_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < rhs.cols_; ++j) {
      GrassmannElement acc(m_);
      for (int k = 0; k < cols_; ++k) acc += at(i, k) * rhs.at(k, j);
      out.at(i, j) = acc;
    }
  return out;
}

GMatrix GMatrix::operator+(const GMatrix& rhs) const {
  require_same_shape(*this, rhs);
  GMatrix out = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) += rhs.at(i, j);
  return out;
}

GMatrix GMatrix::operator-(const GMatrix& rhs) const {
  require_same_shape(*this, rhs);
  GMatrix out = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) -= rhs.at(i, j);
  return out;
}

GMatrix GMatrix::scaled(gcplx s) const {
  GMatrix out = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) *= s;
  return out;
}

CMatrix GMatrix::body() const {
  CMatrix b(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) b(i, j) = at(i, j).body();
  return b;
}

GMatrix GMatrix::nilpotent_part() const {
  GMatrix out = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j).set_coeff(0, 0.0);
  return out;
}

bool GMatrix::is_zero(double tol) const {
  for (const auto& v : e_)
    if (!v.is_zero(tol)) return false;
  return true;
}

GrassmannElement GMatrix::det() const {
  if (rows_ != cols_) throw DomainError("gmatrix: det needs a square matrix");
  if (rows_ > 5) throw DomainError("gmatrix: det supported up to 5x5");
  // Leibniz sum over permutations (Heap's algorithm).
  std::vector<int> perm(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) perm[static_cast<std::size_t>(i)] = i;
  GrassmannElement acc(m_);
  int sign = 1;
  const auto add_term = [&]() {
    GrassmannElement term = GrassmannElement::scalar(m_, sign);
    for (int i = 0; i < rows_; ++i)
      term = term * at(i, perm[static_cast<std::size_t>(i)]);
    acc += term;
  };
  // Iterative Heap's algorithm; each swap flips the permutation parity.
  std::vector<int> c(static_cast<std::size_t>(rows_), 0);
  add_term();
  int i = 0;
  while (i < rows_) {
    auto& ci = c[static_cast<std::size_t>(i)];
    if (ci < i) {
      std::swap(perm[static_cast<std::size_t>(i % 2 == 0 ? 0 : ci)],
                perm[static_cast<std::size_t>(i)]);
      sign = -sign;
      add_term();
      ++ci;
      i = 0;
    } else {
      ci = 0;
      ++i;
    }
  }
  return acc;
}

GrassmannElement GMatrix::trace() const {
  if (rows_ != cols_) throw DomainError("gmatrix: trace needs square");
  GrassmannElement acc(m_);
  for (int i = 0; i < rows_; ++i) acc += at(i, i);
  return acc;
}

GMatrix GMatrix::inverse() const {
  if (rows_ != cols_) throw DomainError("gmatrix: inverse needs square");
  const CMatrix b = body();
  const Eigen::FullPivLU<CMatrix> lu(b);
  if (!lu.isInvertible())
    throw DomainError("gmatrix: body is singular, no inverse");
  const GMatrix inv0 = to_gmatrix(lu.inverse(), m_);
  // K = M0^-1 (M - M0) has nilpotent entries; the Neumann series ends.
  const GMatrix k = inv0 * nilpotent_part();
  GMatrix series = GMatrix::identity(rows_, m_);
  GMatrix power = GMatrix::identity(rows_, m_);
  for (int j = 1; j <= m_; ++j) {
    power = power * k;
    if (power.is_zero()) break;
    series = (j & 1) ? series - power : series + power;
  }
  return series * inv0;
}

double GMatrix::max_abs_diff(const GMatrix& rhs) const {
  require_same_shape(*this, rhs);
  double best = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      best = std::max(best, at(i, j).max_abs_diff(rhs.at(i, j)));
  return best;
}

GMatrix to_gmatrix(const CMatrix& a, int num_generators) {
  GMatrix out(static_cast<int>(a.rows()), static_cast<int>(a.cols()),
              num_generators);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.at(i, j) = GrassmannElement::scalar(num_generators, a(i, j));
  return out;
}

SuperMatrix::SuperMatrix(int p_, int q_, int num_generators)
    : p(p_),
      q(q_),
      a(p_, p_, num_generators),
      b(q_, q_, num_generators),
      chi(p_, q_, num_generators),
      eta(q_, p_, num_generators) {
  if (p_ < 1 || q_ < 1) throw DomainError("supermatrix: need p, q >= 1");
}

SuperMatrix SuperMatrix::identity(int p, int q, int num_generators) {
  SuperMatrix f(p, q, num_generators);
  f.a = GMatrix::identity(p, num_generators);
  f.b = GMatrix::identity(q, num_generators);
  return f;
}

SuperMatrix SuperMatrix::operator*(const SuperMatrix& rhs) const {
  if (p != rhs.p || q != rhs.q)
    throw DomainError("supermatrix: block shape mismatch");
  return split(assemble(*this) * assemble(rhs), p, q);
}

GrassmannElement sdet(const SuperMatrix& f) {
  const GMatrix schur = f.a - f.chi * f.b.inverse() * f.eta;
  return schur.det() * f.b.det().inverse();
}

GrassmannElement sdet_alt(const SuperMatrix& f) {
  const GMatrix schur = f.b - f.eta * f.a.inverse() * f.chi;
  return f.a.det() * schur.det().inverse();
}

GrassmannElement str(const SuperMatrix& f) {
  return f.a.trace() - f.b.trace();
}

GrassmannElement str_log(const SuperMatrix& f) {
  const int m = f.num_generators();
  const CMatrix a0 = f.a.body();
  const CMatrix b0 = f.b.body();
  const Eigen::FullPivLU<CMatrix> lua(a0), lub(b0);
  if (!lua.isInvertible() || !lub.isInvertible())
    throw DomainError("str_log: numeric diagonal blocks must be invertible");
  const gcplx log_det_ratio =
      std::log(lua.determinant()) - std::log(lub.determinant());

  const GMatrix full = assemble(f);
  CMatrix f0 = full.body();
  const GMatrix k =
      to_gmatrix(f0.fullPivLu().inverse(), m) * full.nilpotent_part();

  // str of the Mercator series sum (-1)^{j+1} K^j / j (terminates).
  GrassmannElement acc = GrassmannElement::scalar(m, log_det_ratio);
  GMatrix power = GMatrix::identity(f.p + f.q, m);
  for (int j = 1; j <= m; ++j) {
    power = power * k;
    if (power.is_zero()) break;
    GrassmannElement tr(m);
    for (int i = 0; i < f.p; ++i) tr += power.at(i, i);
    for (int i = 0; i < f.q; ++i) tr -= power.at(f.p + i, f.p + i);
    tr *= gcplx((j & 1 ? 1.0 : -1.0) / j, 0.0);
    acc += tr;
  }
  return acc;
}

}  // namespace ginlab
