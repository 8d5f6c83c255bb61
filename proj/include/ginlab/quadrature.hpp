#pragma once

#include <cstddef>
#include <vector>

namespace ginlab {

// Gauss-Legendre rule on [-1, 1]: nodes and weights, exact for polynomials
// of degree 2n-1, spectrally accurate for smooth integrands.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Computes (and caches) the n-point rule. Thread-compatible for distinct n
// after first use; callers in this project build rules up front.
const GaussLegendreRule& gauss_legendre(int n);

// 1D integral over [a, b].
template <typename F>
double integrate_1d(F&& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

// Tensor-product integral over [ax, bx] x [ay, by].
template <typename F>
double integrate_2d(F&& f, double ax, double bx, double ay, double by, int nx,
                    int ny) {
  const auto& rx = gauss_legendre(nx);
  const auto& ry = gauss_legendre(ny);
  const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
  const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
  double sum = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = mx + hx * rx.nodes[i];
    double row = 0.0;
    for (int j = 0; j < ny; ++j)
      row += ry.weights[j] * f(x, my + hy * ry.nodes[j]);
    sum += rx.weights[i] * row;
  }
  return hx * hy * sum;
}

// Tensor-product integral over a 4-cube [a,b]^4 (same rule per axis).
template <typename F>
double integrate_4d_cube(F&& f, double a, double b, int n) {
  const auto& r = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = mid + half * r.nodes[i];
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double inner = 0.0;
        for (int l = 0; l < n; ++l) inner += r.weights[l] * f(x[i], x[j], x[k], x[l]);
        sum += r.weights[i] * r.weights[j] * r.weights[k] * inner;
      }
  const double h4 = half * half * half * half;
  return h4 * sum;
}

}  // namespace ginlab
