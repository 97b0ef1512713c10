#include "steklov/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace steklov {

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples, double lo, double hi) {
  ExponentFit f;
  f.window_lo = lo;
  f.window_hi = hi;
  for (const auto& [lam, val] : samples) {
    if (lam < lo || lam > hi) continue;
    if (!(lam > 0.0) || !(val > 0.0)) throw std::invalid_argument("fit_exponent: lambda and value must be positive");
    f.points.emplace_back(std::log(lam), std::log(val));
  }
  const std::size_t n = f.points.size();
  if (n < 4) throw std::invalid_argument("fit_exponent: fewer than 4 points in window");
  double mx = 0, my = 0;
  for (const auto& [x, y] : f.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : f.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponent: all lambda equal");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (const auto& [x, y] : f.points) {
    const double r = y - (f.intercept + f.slope * x);
    ssr += r * r;
    f.residual_max = std::max(f.residual_max, std::abs(r));
  }
  f.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ssr / syy, 0.0, 1.0);
  return f;
}

WindowStability dyadic_window_stability(const std::vector<std::pair<double, double>>& samples, double lambda0,
                                        double tolerance) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("dyadic_window_stability: lambda0 must be positive");
  WindowStability s;
  double top = 0.0;
  for (const auto& pt : samples) top = std::max(top, pt.first);
  for (double lo = lambda0; lo < top; lo *= 2.0) {
    std::size_t count = 0;
    for (const auto& pt : samples) count += pt.first >= lo && pt.first <= 2.0 * lo;
    if (count >= 4) s.fits.push_back(fit_exponent(samples, lo, 2.0 * lo));
  }
  for (std::size_t i = 1; i < s.fits.size(); ++i)
    s.max_shift = std::max(s.max_shift, std::abs(s.fits[i].slope - s.fits[i - 1].slope));
  s.stable = s.fits.size() >= 2 && s.max_shift < tolerance;
  return s;
}

}  // namespace steklov
