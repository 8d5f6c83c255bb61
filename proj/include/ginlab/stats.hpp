#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ginlab {

double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);  // unbiased, needs n >= 2
double std_error_of_mean(std::span<const double> x);

// Jackknife standard error from leave-one-out statistics:
// se^2 = (T-1)/T * sum_j (s_j - mean(s))^2.
double jackknife_std_error(std::span<const double> leave_one_out);

// Ordinary least squares y = a + b x with independently known standard
// errors on y; slope uncertainty propagated from those errors.
struct SlopeFit {
  double slope = 0.0;
  double slope_std_error = 0.0;
  double intercept = 0.0;
};
SlopeFit fit_slope(std::span<const double> x, std::span<const double> y,
                   std::span<const double> y_std_error);

// Stable mean and standard error of exp(L) given per-trial log-values L,
// using max-shifted exponentials; safe when exp(L) would overflow.
struct LogSpaceMean {
  double log_mean;        // log E[exp(L)]
  double mean;            // exp(log_mean), may be inf if truly huge
  double std_error;       // standard error of the mean estimate
  double rel_std_error;   // std_error / mean, always finite
};
LogSpaceMean mean_of_exponentials(std::span<const double> log_values);

}  // namespace ginlab
