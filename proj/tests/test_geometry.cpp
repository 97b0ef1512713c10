#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "steklov/geometry.hpp"

using namespace steklov;

TEST_CASE("circle grid weights and exactness") {
  const auto g = make_circle_grid(4);
  for (double w : g.weights()) CHECK(w == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(g.total_measure() == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(g.exactness_degree() == 3);
  CHECK_THROWS_AS(make_circle_grid(3), std::invalid_argument);

  const auto h = make_circle_grid(256);
  double s = 0;
  for (std::size_t i = 0; i < h.size(); ++i) s += h.weight(i) * std::pow(std::cos(8 * h.longitude(i)), 2);
  CHECK(std::abs(s - kPi) < 1e-12);
}

TEST_CASE("sphere grid total weight and orthonormality of a sectoral-ish harmonic") {
  const auto g = make_sphere_grid(2, 4);
  CHECK(std::abs(g.total_measure() - 4 * kPi) < 1e-12 * 4 * kPi);
  CHECK_THROWS_AS(make_sphere_grid(1, 8), std::invalid_argument);
  CHECK_THROWS_AS(make_sphere_grid(4, 3), std::invalid_argument);

  // Y_10^3 ~ P_10^3(cos t) cos(3 phi); integrate its square with an independent normalization.
  const auto h = make_sphere_grid(64, 128);
  double s = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::cos(h.colatitude(i));
    const double p = std::assoc_legendre(10, 3, x);
    s += h.weight(i) * p * p * std::pow(std::cos(3 * h.longitude(i)), 2);
  }
  // int P_l^m^2 dx = 2/(2l+1) (l+m)!/(l-m)!, int cos^2 = pi.
  const double norm = 2.0 / 21.0 * std::tgamma(14.0) / std::tgamma(8.0) * kPi;
  CHECK(std::abs(s / norm - 1.0) < 1e-10);
}

TEST_CASE("geodesic distances") {
  const auto c = make_circle_lattice(4);
  CHECK(geodesic_distance(c, 0, 2) == doctest::Approx(kPi));
  CHECK(circle_distance(0.1, 6.2) == doctest::Approx(2 * kPi - 6.1).epsilon(1e-14));
  CHECK(great_circle_distance(0.0, 0.0, kPi / 2, 1.3) == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(geodesic_distance(c, 0, 4), std::out_of_range);

  const auto g = make_sphere_grid(6, 12);
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int t = 0; t < 500; ++t) {
    const auto a = pick(rng), b = pick(rng), d = pick(rng);
    CHECK(geodesic_distance(g, a, b) <= geodesic_distance(g, a, d) + geodesic_distance(g, d, b) + 1e-12);
    CHECK(geodesic_distance(g, a, b) == doctest::Approx(geodesic_distance(g, b, a)));
  }
}

TEST_CASE("lp norms") {
  const auto g = make_circle_grid(64);
  std::vector<double> one(g.size(), 1.0), c(g.size());
  CHECK(lp_norm(one, g, 2) == doctest::Approx(std::sqrt(2 * kPi)));
  for (int k : {1, 3, 7}) {
    for (std::size_t i = 0; i < g.size(); ++i) c[i] = std::cos(k * g.longitude(i));
    CHECK(lp_norm(c, g, kInfinity) == doctest::Approx(1.0));
  }
  // int |cos k theta| = 4, needs resolution of |.|: use a fine grid.
  const auto f = make_circle_grid(1 << 16);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = std::cos(5 * f.longitude(i));
  CHECK(lp_norm(v, f, 1) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK_THROWS_AS(lp_norm(v, f, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lp_norm(one, f, 2), std::invalid_argument);

  // Hoelder on random data.
  std::mt19937 rng(11);
  std::normal_distribution<double> n;
  for (auto& x : c) x = n(rng);
  for (double p : {1.0, 2.0, 3.0})
    for (double q : {4.0, 8.0, kInfinity})
      CHECK(lp_norm(c, g, p) <= std::pow(g.total_measure(), 1 / p - 1 / q) * lp_norm(c, g, q) * (1 + 1e-12));
}

TEST_CASE("radial Gauss-Jacobi and solid norms") {
  for (int n : {1, 2}) {
    std::vector<double> x, w;
    gauss_jacobi_radial(8, n, x, w);
    double s = 0, m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += w[i];
      m += w[i] * std::pow(x[i], 9);
    }
    CHECK(std::abs(s - 1.0 / (n + 1)) < 1e-12);
    CHECK(std::abs(m - 1.0 / (n + 10)) < 1e-12);
  }
  const auto solid = make_solid_grid(make_circle_grid(32), 12);
  DegreeComponent c4{4, {}};
  for (std::size_t i = 0; i < solid.boundary.size(); ++i) c4.values.push_back(std::cos(4 * solid.boundary.longitude(i)));
  const std::vector<DegreeComponent> comps{c4};
  CHECK(solid_lp_norm(comps, solid, 2) == doctest::Approx(std::sqrt(kPi / 10)).epsilon(1e-12));
  CHECK(solid_lp_norm(comps, solid, kInfinity) == doctest::Approx(1.0));
  const std::vector<DegreeComponent> one{{0, std::vector<double>(solid.boundary.size(), 1.0)}};
  CHECK(solid_lp_norm(one, solid, 2) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
}
