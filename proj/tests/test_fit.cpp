#include "doctest.h"

#include <cmath>

#include "steklov/fit.hpp"

using namespace steklov;

TEST_CASE("exponent fits") {
  std::vector<std::pair<double, double>> pts;
  for (double l = 2; l <= 256; l *= 1.5) pts.emplace_back(l, 3 * std::sqrt(l));
  const auto f = fit_exponent(pts);
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.residual_max < 1e-12);

  auto bad = pts;
  bad[3].second *= 5;
  CHECK(fit_exponent(bad).residual_max > 1.0);
  bad[0].second = 0;
  CHECK_THROWS(fit_exponent(bad));
  CHECK_THROWS(fit_exponent(pts, 2, 5));
  const auto w = fit_exponent(pts, 10, 100);
  for (const auto& p : w.points) CHECK((p.first >= std::log(10) && p.first <= std::log(100)));

  const auto st = dyadic_window_stability(pts, 2.0);
  CHECK(st.stable == false);  // 1.5-spaced samples leave < 4 per dyadic window
  std::vector<std::pair<double, double>> dense;
  for (double l = 4; l <= 128; l += 1) dense.emplace_back(l, std::pow(l, -0.25) * (1 + 0.05 / l));
  const auto st2 = dyadic_window_stability(dense, 4.0);
  CHECK(st2.fits.size() == 5);
  CHECK(st2.stable);
}
