#include "ginlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "ginlab/errors.hpp"

namespace ginlab {

double mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("mean: empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("sample_variance: need two values");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double std_error_of_mean(std::span<const double> x) {
  return std::sqrt(sample_variance(x) / static_cast<double>(x.size()));
}

double jackknife_std_error(std::span<const double> leave_one_out) {
  const auto t = static_cast<double>(leave_one_out.size());
  if (t < 2) throw DomainError("jackknife_std_error: need two values");
  const double m = mean(leave_one_out);
  double s = 0.0;
  for (double v : leave_one_out) s += (v - m) * (v - m);
  return std::sqrt((t - 1.0) / t * s);
}

SlopeFit fit_slope(std::span<const double> x, std::span<const double> y,
                   std::span<const double> y_std_error) {
  if (x.size() != y.size() || x.size() != y_std_error.size() || x.size() < 2)
    throw DomainError("fit_slope: need matching samples of size >= 2");
  const double xbar = mean(x);
  double sxx = 0.0;
  for (double v : x) sxx += (v - xbar) * (v - xbar);
  if (sxx == 0.0) throw DomainError("fit_slope: degenerate abscissae");
  SlopeFit fit;
  double var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = (x[i] - xbar) / sxx;
    fit.slope += c * y[i];
    var += c * c * y_std_error[i] * y_std_error[i];
  }
  fit.slope_std_error = std::sqrt(var);
  fit.intercept = mean(y) - fit.slope * xbar;
  return fit;
}

LogSpaceMean mean_of_exponentials(std::span<const double> log_values) {
  if (log_values.empty())
    throw DomainError("mean_of_exponentials: empty sample");
  const double m = *std::max_element(log_values.begin(), log_values.end());
  const auto t = static_cast<double>(log_values.size());
  // First and second moments of exp(L - m).
  double s1 = 0.0, s2 = 0.0;
  for (double lv : log_values) {
    const double e = std::exp(lv - m);
    s1 += e;
    s2 += e * e;
  }
  s1 /= t;
  s2 /= t;
  LogSpaceMean out;
  out.log_mean = m + std::log(s1);
  out.mean = std::exp(out.log_mean);
  // Var(exp(L-m)) and the scaled standard error; rel error is scale-free.
  const double var_shifted = std::max(0.0, (s2 - s1 * s1) * (t / std::max(1.0, t - 1.0)));
  const double se_shifted = std::sqrt(var_shifted / t);
  out.rel_std_error = s1 > 0.0 ? se_shifted / s1 : 0.0;
  out.std_error = std::exp(m) * se_shifted;
  return out;
}

}  // namespace ginlab
