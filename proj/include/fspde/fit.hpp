#pragma once

#include <span>
#include <utility>

namespace fspde {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  ///< largest |log y - fitted| over the points
};

/// Ordinary least squares of log(y) on log(x). Needs >= 2 points with x, y > 0
/// and at least two distinct x; throws std::invalid_argument otherwise.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

/// Summation in a fixed pairwise order; the result depends only on the order
/// of `values`, never on how they were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace fspde
