#pragma once

#include <utility>
#include <vector>

namespace steklov {

/// Least-squares power law value ~ C lambda^slope.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;  // log C
  double r_squared = 0.0;
  double residual_max = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::vector<std::pair<double, double>> points;  // (log lambda, log value)
};

/// OLS on (log lambda, log value) over points with lambda in [lo, hi].
/// Throws for non-positive lambda or value in the window and for fewer than 4 points.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples, double lo = 0.0,
                         double hi = 1e300);

struct WindowStability {
  std::vector<ExponentFit> fits;  // one per dyadic window with enough points
  double max_shift = 0.0;         // largest slope change between consecutive windows
  bool stable = false;            // max_shift < tolerance and at least two windows
};

/// Fits on dyadic windows [lambda0 2^j, lambda0 2^(j+1)] up to the largest sample.
WindowStability dyadic_window_stability(const std::vector<std::pair<double, double>>& samples, double lambda0,
                                        double tolerance = 0.05);

}  // namespace steklov
