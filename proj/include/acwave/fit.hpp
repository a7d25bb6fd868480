#pragma once

// ============================================================================
// Log-log slope extraction shared by the dyadic-ladder sweeps and the
// dispersive-decay fits: ordinary least squares on (x, log2 value) pairs,
// with the standard error of the fitted slope and a pass/fail verdict
// against a predicted exponent at a configurable tolerance.
// ============================================================================

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "acwave/errors.hpp"

namespace acwave {

// Fitted model: log2 value = slope * x + intercept, where x is a ladder
// index j or log2 lambda depending on the experiment.
struct ScalingFit {
  std::vector<double> xs;
  std::vector<double> log2_values;
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;  // standard error of the slope estimate
  double predicted_slope = 0.0;
  double tolerance = 0.1;
  bool pass = false;  // |slope - predicted_slope| <= tolerance
};

inline ScalingFit fit_log2(std::vector<double> xs,
                           std::vector<double> log2_values,
                           double predicted_slope, double tolerance = 0.1) {
  if (xs.size() != log2_values.size())
    throw ValidationError("fit_log2: mismatched abscissa/value lengths");
  if (xs.size() < 2)
    throw ValidationError("fit_log2: need at least two points");
  if (!(tolerance > 0.0))
    throw ValidationError("fit_log2: tolerance must be positive");
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(log2_values[i]))
      throw ValidationError("fit_log2: non-finite sample");
    mx += xs[i];
    my += log2_values[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    sxx += dx * dx;
    sxy += dx * (log2_values[i] - my);
  }
  if (!(sxx > 0.0))
    throw ValidationError("fit_log2: abscissae are all equal");

  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double res = log2_values[i] - (fit.intercept + fit.slope * xs[i]);
    rss += res * res;
  }
  fit.std_error =
      n > 2 ? std::sqrt(rss / (static_cast<double>(n - 2) * sxx)) : 0.0;
  fit.predicted_slope = predicted_slope;
  fit.tolerance = tolerance;
  fit.pass = std::abs(fit.slope - predicted_slope) <= tolerance;
  fit.xs = std::move(xs);
  fit.log2_values = std::move(log2_values);
  return fit;
}

}  // namespace acwave
