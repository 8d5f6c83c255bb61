#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace ginlab {

using gcplx = std::complex<double>;

// Element of the complex Grassmann algebra on m anticommuting generators
// (m <= 20). Coefficients are stored densely, indexed by the generator
// bitmask; monomials are kept in canonical ascending-index order, with
// reordering signs tracked by inversion parity.
//
// Berezin integration follows right-to-left iteration: in a differential
// product written after the integrand, the LEFTMOST differential acts
// first, and a single step over generator g extracts the coefficient of g
// after moving g to the rightmost position of each monomial. With that
// convention, integrating f = c * g_1 g_2 ... g_k over the sequence
// (g_k, ..., g_1) yields c.
class GrassmannElement {
 public:
  explicit GrassmannElement(int num_generators);
  static GrassmannElement scalar(int num_generators, gcplx c);
  static GrassmannElement generator(int num_generators, int index);

  int num_generators() const { return m_; }
  gcplx coeff(std::uint32_t mask) const { return c_[mask]; }
  void set_coeff(std::uint32_t mask, gcplx v);
  void add_coeff(std::uint32_t mask, gcplx v);
  gcplx body() const { return c_[0]; }  // coefficient of the identity
  bool is_zero(double tol = 0.0) const;
  int min_degree() const;  // smallest monomial degree present, m_+1 if zero

  GrassmannElement& operator+=(const GrassmannElement& rhs);
  GrassmannElement& operator-=(const GrassmannElement& rhs);
  GrassmannElement& operator*=(gcplx s);
  friend GrassmannElement operator+(GrassmannElement a,
                                    const GrassmannElement& b) {
    return a += b;
  }
  friend GrassmannElement operator-(GrassmannElement a,
                                    const GrassmannElement& b) {
    return a -= b;
  }
  friend GrassmannElement operator*(gcplx s, GrassmannElement a) {
    return a *= s;
  }
  GrassmannElement operator*(const GrassmannElement& rhs) const;

  // exp(x) = exp(body) * sum_k nilpotent^k / k!; the series terminates
  // because the nilpotent part has positive minimum degree.
  GrassmannElement exp() const;

  // Multiplicative inverse; requires a nonzero body.
  GrassmannElement inverse() const;

  // One Berezin step over generator g.
  GrassmannElement integrate(int g) const;
  // Iterated Berezin integral; order[0] acts first.
  GrassmannElement integrate(std::span<const int> order) const;

  // Largest coefficient magnitude of (*this - rhs).
  double max_abs_diff(const GrassmannElement& rhs) const;
  double max_abs_coeff() const;

 private:
  int m_;
  std::vector<gcplx> c_;  // 2^m dense coefficients
};

// Sign of merging canonical monomials a and b (disjoint bitmasks) into one
// canonical monomial: parity of the number of transpositions.
int merge_sign(std::uint32_t a, std::uint32_t b);

}  // namespace ginlab
