#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "steklov/harmonic_basis.hpp"

using namespace steklov;

namespace {
std::shared_ptr<const HarmonicBasis> sphere(int K) {
  return std::make_shared<const HarmonicBasis>(2, K, make_sphere_grid_for_degree(2 * K));
}
std::shared_ptr<const HarmonicBasis> circle(int K) {
  return std::make_shared<const HarmonicBasis>(1, K, make_circle_grid_for_degree(2 * K));
}
}  // namespace

TEST_CASE("mode counts and eigenvalues") {
  CHECK(circle(8)->size() == 17);
  CHECK(sphere(10)->size() == 121);
  const auto b = sphere(10);
  CHECK(b->sqrt_eigenvalue(b->index_of(3, 2, true)) == doctest::Approx(std::sqrt(12.0)));
  CHECK(b->multiplicity(4) == 9);
  CHECK(circle(8)->multiplicity(0) == 1);
  CHECK(circle(8)->multiplicity(5) == 2);
  CHECK_THROWS(HarmonicBasis(2, 10, make_sphere_grid(6, 12)));
}

TEST_CASE("orthonormality under grid quadrature") {
  for (auto b : {circle(12), sphere(9)}) {
    const auto& g = b->grid();
    std::vector<std::vector<double>> y;
    for (std::size_t i = 0; i < b->size(); ++i) {
      std::vector<double> e(b->size(), 0.0);
      e[i] = 1;
      y.push_back(b->synthesize(e));
    }
    double worst = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0;
        for (std::size_t q = 0; q < g.size(); ++q) s += g.weight(q) * y[i][q] * y[j][q];
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("round trip and Parseval") {
  std::mt19937 rng(5);
  std::normal_distribution<double> n;
  for (auto b : {circle(20), sphere(16)}) {
    std::vector<double> c(b->size());
    for (auto& x : c) x = n(rng);
    const auto v = b->synthesize(c);
    const auto back = b->analyze(v);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(back[i] - c[i]) < 1e-10);
    CHECK(lp_norm(v, b->grid(), 2) == doctest::Approx(euclidean_norm(c)).epsilon(1e-10));
  }
}

TEST_CASE("analysis of a two-term trigonometric signal") {
  const auto b = circle(10);
  const auto& g = b->grid();
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::cos(3 * g.longitude(i)) + 0.5 * std::sin(7 * g.longitude(i));
  const auto c = b->analyze(v);
  int nonzero = 0;
  for (double x : c) nonzero += std::abs(x) > 1e-12;
  CHECK(nonzero == 2);
  CHECK(c[b->index_of(3, 3, false)] == doctest::Approx(std::sqrt(kPi)));
  CHECK(c[b->index_of(7, 7, true)] == doctest::Approx(0.5 * std::sqrt(kPi)));
  CHECK(b->energy_leak([](double, double t) { return std::cos(3 * t) + 0.5 * std::sin(7 * t); }) < 1e-20);

  // cos 14t on the 21-node grid is indistinguishable from cos 7t; the leak diagnostic sees it.
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::cos(14 * g.longitude(i));
  const auto aliased = b->analyze(v);
  CHECK(std::abs(aliased[b->index_of(7, 7, false)]) > 1.0);
  CHECK(b->energy_leak([](double, double t) { return std::cos(14 * t); }) == doctest::Approx(1.0));
  CHECK(sphere(4)->energy_leak([](double c, double) { return std::cos(c) + std::pow(std::cos(c), 6); }) > 1e-4);
}

TEST_CASE("addition theorem and zonal harmonics") {
  const auto b = sphere(12);
  const auto& g = b->grid();
  for (int k : {0, 3, 12}) {
    std::vector<double> acc(g.size(), 0.0);
    for (std::size_t i = b->degree_offset(k); i < b->degree_offset(k) + b->multiplicity(k); ++i) {
      std::vector<double> e(b->size(), 0.0);
      e[i] = 1;
      const auto y = b->synthesize(e);
      for (std::size_t q = 0; q < g.size(); ++q) acc[q] += y[q] * y[q];
    }
    for (double a : acc) CHECK(std::abs(a - (2 * k + 1) / (4 * kPi)) < 1e-9);

    const auto z = zonal_coefficients(*b, k, 0.0, 0.0);
    CHECK(euclidean_norm(z) == doctest::Approx(1.0));
    CHECK(sup_norm(*b, z) == doctest::Approx(std::sqrt((2 * k + 1) / (4 * kPi))).epsilon(1e-10));
  }
  const auto z0 = zonal_harmonic(*b, 0);
  for (double v : z0) CHECK(v == doctest::Approx(1 / std::sqrt(4 * kPi)));

  // Rotated pole: invariant under rotation about the pole axis, i.e. depends only on distance.
  const auto zc = zonal_coefficients(*b, 5, 1.1, 0.4);
  const auto zv = b->synthesize(zc);
  for (std::size_t q = 0; q < g.size(); q += 37) {
    const double d = great_circle_distance(1.1, 0.4, g.colatitude(q), g.longitude(q));
    CHECK(zv[q] == doctest::Approx(std::sqrt(11 / (4 * kPi)) * std::legendre(5, std::cos(d))).epsilon(1e-10));
  }

  const auto c = circle(6);
  const auto zz = zonal_harmonic(*c, 4, 0.0, 0.7);
  for (std::size_t q = 0; q < c->grid().size(); ++q)
    CHECK(zz[q] == doctest::Approx(std::cos(4 * (c->grid().longitude(q) - 0.7)) / std::sqrt(kPi)));
  CHECK_THROWS(zonal_harmonic(*c, 7));
}

TEST_CASE("highest weight harmonics") {
  const auto b = sphere(12);
  const auto& g = b->grid();
  const auto h1 = highest_weight_harmonic(*b, 1);
  for (std::size_t q = 0; q < g.size(); ++q)
    CHECK(h1[q] == doctest::Approx(std::sqrt(3 / (4 * kPi)) * std::sin(g.colatitude(q)) * std::cos(g.longitude(q))));
  CHECK(lp_norm(highest_weight_harmonic(*b, 9), g, 2) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS(highest_weight_harmonic(*circle(4), 2));
  CHECK_THROWS(highest_weight_harmonic(*b, 13));
}
