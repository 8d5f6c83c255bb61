#include "ginlab/grassmann.hpp"

#include <bit>
#include <cmath>

#include "ginlab/errors.hpp"

namespace ginlab {

namespace {

constexpr int kMaxGenerators = 20;

void require_same_algebra(const GrassmannElement& a,
                          const GrassmannElement& b) {
  if (a.num_generators() != b.num_generators())
    throw DomainError("grassmann: mixing algebras of different rank");
}

}  // namespace

int merge_sign(std::uint32_t a, std::uint32_t b) {
  // Moving each generator of b into place inside a costs one transposition
  // per generator of a with a larger index.
  int inversions = 0;
  std::uint32_t bb = b;
  while (bb != 0) {
    const int j = std::countr_zero(bb);
    inversions += std::popcount(a >> (j + 1));
    bb &= bb - 1;
  }
  return (inversions & 1) ? -1 : 1;
}

GrassmannElement::GrassmannElement(int num_generators) : m_(num_generators) {
  if (m_ < 0 || m_ > kMaxGenerators)
    throw DomainError("grassmann: generator count out of range [0, 20]");
  c_.assign(std::size_t{1} << m_, gcplx(0.0, 0.0));
}

GrassmannElement GrassmannElement::scalar(int num_generators, gcplx c) {
  GrassmannElement e(num_generators);
  e.c_[0] = c;
  return e;
}

GrassmannElement GrassmannElement::generator(int num_generators, int index) {
  GrassmannElement e(num_generators);
  if (index < 0 || index >= num_generators)
    throw DomainError("grassmann: generator index out of range");
  e.c_[std::uint32_t{1} << index] = 1.0;
  return e;
}

void GrassmannElement::set_coeff(std::uint32_t mask, gcplx v) {
  if (mask >= c_.size()) throw DomainError("grassmann: bad monomial mask");
  c_[mask] = v;
}

void GrassmannElement::add_coeff(std::uint32_t mask, gcplx v) {
  if (mask >= c_.size()) throw DomainError("grassmann: bad monomial mask");
  c_[mask] += v;
}

bool GrassmannElement::is_zero(double tol) const {
  for (const gcplx& v : c_)
    if (std::abs(v) > tol) return false;
  return true;
}

int GrassmannElement::min_degree() const {
  int best = m_ + 1;
  for (std::uint32_t mask = 0; mask < c_.size(); ++mask)
    if (c_[mask] != gcplx(0.0, 0.0))
      best = std::min(best, std::popcount(mask));
  return best;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& rhs) {
  require_same_algebra(*this, rhs);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& rhs) {
  require_same_algebra(*this, rhs);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(gcplx s) {
  for (gcplx& v : c_) v *= s;
  return *this;
}

GrassmannElement GrassmannElement::operator*(
    const GrassmannElement& rhs) const {
  require_same_algebra(*this, rhs);
  // Convolution over nonzero monomial pairs; disjointness is mandatory
  // because repeated generators square to zero.
  std::vector<std::uint32_t> left, right;
  for (std::uint32_t mask = 0; mask < c_.size(); ++mask)
    if (c_[mask] != gcplx(0.0, 0.0)) left.push_back(mask);
  for (std::uint32_t mask = 0; mask < rhs.c_.size(); ++mask)
    if (rhs.c_[mask] != gcplx(0.0, 0.0)) right.push_back(mask);

  GrassmannElement out(m_);
  for (const std::uint32_t a : left) {
    const gcplx ca = c_[a];
    for (const std::uint32_t b : right) {
      if ((a & b) != 0) continue;
      out.c_[a | b] += static_cast<double>(merge_sign(a, b)) * ca * rhs.c_[b];
    }
  }
  return out;
}

GrassmannElement GrassmannElement::exp() const {
  GrassmannElement nil = *this;
  const gcplx b = body();
  nil.c_[0] = 0.0;
  GrassmannElement result = scalar(m_, 1.0);
  GrassmannElement term = scalar(m_, 1.0);
  // Nilpotency: each factor raises the minimum degree, so at most m_ terms.
  for (int k = 1; k <= m_; ++k) {
    term = term * nil;
    term *= gcplx(1.0 / k, 0.0);
    if (term.is_zero()) break;
    result += term;
  }
  result *= std::exp(b);
  return result;
}

GrassmannElement GrassmannElement::inverse() const {
  const gcplx b = body();
  if (std::abs(b) == 0.0)
    throw DomainError("grassmann: inverse needs a nonzero body");
  // x = b (1 + nu) with nu nilpotent: 1/x = (1/b) sum (-nu)^k.
  GrassmannElement nu = *this;
  nu *= gcplx(1.0, 0.0) / b;
  nu.c_[0] = 0.0;
  GrassmannElement result = scalar(m_, 1.0);
  GrassmannElement term = scalar(m_, 1.0);
  for (int k = 1; k <= m_; ++k) {
    term = term * nu;
    if (term.is_zero()) break;
    result += (k & 1 ? gcplx(-1.0, 0.0) : gcplx(1.0, 0.0)) * term;
  }
  result *= gcplx(1.0, 0.0) / b;
  return result;
}

GrassmannElement GrassmannElement::integrate(int g) const {
  if (g < 0 || g >= m_)
    throw DomainError("grassmann: integration generator out of range");
  const std::uint32_t bit = std::uint32_t{1} << g;
  GrassmannElement out(m_);
  for (std::uint32_t mask = 0; mask < c_.size(); ++mask) {
    if ((mask & bit) == 0 || c_[mask] == gcplx(0.0, 0.0)) continue;
    // Move g past every higher-index generator to the rightmost slot.
    const int sign = (std::popcount(mask >> (g + 1)) & 1) ? -1 : 1;
    out.c_[mask ^ bit] += static_cast<double>(sign) * c_[mask];
  }
  return out;
}

GrassmannElement GrassmannElement::integrate(std::span<const int> order) const {
  GrassmannElement out = *this;
  for (const int g : order) out = out.integrate(g);
  return out;
}

double GrassmannElement::max_abs_diff(const GrassmannElement& rhs) const {
  require_same_algebra(*this, rhs);
  double best = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i)
    best = std::max(best, std::abs(c_[i] - rhs.c_[i]));
  return best;
}

double GrassmannElement::max_abs_coeff() const {
  double best = 0.0;
  for (const gcplx& v : c_) best = std::max(best, std::abs(v));
  return best;
}

}  // namespace ginlab
