#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "steklov/steklov_solver.hpp"

using namespace steklov;

namespace {
std::shared_ptr<const HarmonicBasis> sphere(int K) {
  return std::make_shared<const HarmonicBasis>(2, K, make_sphere_grid_for_degree(2 * K));
}
std::shared_ptr<const HarmonicBasis> circle(int K) {
  return std::make_shared<const HarmonicBasis>(1, K, make_circle_grid_for_degree(2 * K));
}
std::vector<double> unit(std::size_t n, std::size_t i) {
  std::vector<double> e(n, 0.0);
  e[i] = 1.0;
  return e;
}
}  // namespace

TEST_CASE("sigma exponent") {
  CHECK(sigma(2, 2) == 0.0);
  CHECK(sigma(kInfinity, 2) == 0.5);
  // Both branches at p_c = 6.
  CHECK(0.5 * (0.5 - 1.0 / 6) == doctest::Approx(1.0 / 6));
  CHECK(0.5 - 2.0 / 6 == doctest::Approx(1.0 / 6));
  CHECK(sigma(6, 2) == doctest::Approx(1.0 / 6));
  CHECK(sigma(6 - 1e-9, 2) == doctest::Approx(sigma(6, 2)));
  CHECK(sigma(4, 2) == doctest::Approx(0.125));
  CHECK(sigma(10, 1) == 0.0);
  CHECK(sigma(kInfinity, 3) == doctest::Approx(1.0));
  CHECK(critical_exponent(3) == doctest::Approx(4.0));
  CHECK_THROWS(sigma(1.5, 2));
}

TEST_CASE("free spectrum and shifts") {
  const auto b = circle(16);
  const auto s = solve_spectrum(make_potential(1, PotentialSpec::parse("zero")), b);
  CHECK(s.pairs[0].lambda == 0.0);
  for (std::size_t j = 1; j < s.pairs.size(); ++j) CHECK(std::abs(s.pairs[j].lambda - double((j + 1) / 2)) < 1e-10);
  const auto c = solve_spectrum(make_potential(1, PotentialSpec::parse("constant:0.75")), b);
  for (std::size_t j = 0; j < c.pairs.size(); ++j) CHECK(c.pairs[j].lambda == doctest::Approx(s.pairs[j].lambda + 0.75));
  CHECK(counting_function(s, 4.0) == 9);
  CHECK(cluster_vectors(s, 4.0).size() == 2);
}

TEST_CASE("refinement of the cos potential spectrum") {
  const auto V = make_potential(1, PotentialSpec::parse("cos-lowfreq"));
  const auto a = solve_spectrum(V, circle(64));
  const auto b = solve_spectrum(V, circle(96));
  // Low eigenvalues are insensitive to the truncation.
  for (std::size_t j = 0; j < 80; ++j) CHECK(std::abs(a.pairs[j].lambda - b.pairs[j].lambda) < 1e-8);
}

TEST_CASE("harmonic extension of pure modes") {
  const auto b = circle(32);
  const auto solid = std::make_shared<const SolidGrid>(make_extension_grid(*b, 4));
  for (int k : {0, 4, 9, 32}) {
    const auto prof = extend_harmonically(b, unit(b->size(), b->index_of(k, k, false)), solid);
    REQUIRE(prof.components().size() == 1);
    CHECK(prof.components()[0].degree == k);
    for (double p : {2.0, 4.0})
      CHECK(interior_boundary_ratio(prof, p) == doctest::Approx(std::pow(k * p + 2, -1 / p)).epsilon(1e-10));
    CHECK(interior_boundary_ratio(prof, kInfinity) == doctest::Approx(1.0));
    const double l2 = prof.interior_norm(2);
    CHECK(l2 == doctest::Approx(std::sqrt(1.0 / (2 * k + 2))).epsilon(1e-12));
  }
  const auto four = extend_harmonically(b, unit(b->size(), b->index_of(4, 4, false)), solid);
  CHECK(interior_boundary_ratio(four, 2) == doctest::Approx(0.31623).epsilon(1e-5));

  // Trace at r = 1 reproduces the boundary values; interior values follow r^k.
  std::mt19937 rng(2);
  std::normal_distribution<double> n;
  std::vector<double> c(b->size());
  for (auto& x : c) x = n(rng);
  const auto prof = extend_harmonically(b, c, solid);
  const auto tr = prof.trace(1.0);
  const auto direct = b->make_evaluator(solid->boundary.lattice()).synthesize(c);
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(std::abs(tr[i] - direct[i]) < 1e-10);
  CHECK(prof.interior_norm(kInfinity) <= prof.boundary_norm(kInfinity) * (1 + 1e-12));
  for (double r : {0.3, 0.7})
    for (std::size_t i = 0; i < tr.size(); i += 13) CHECK(std::abs(prof.value(r, i)) <= prof.ball_sup(1.0));
}

TEST_CASE("discrete harmonicity of the extension") {
  // Five-point Laplacian in polar coordinates at an interior point, O(h^2).
  const auto b = circle(6);
  const auto solid = std::make_shared<const SolidGrid>(make_extension_grid(*b, 2));
  std::vector<double> c(b->size(), 0.0);
  c[b->index_of(3, 3, false)] = 1.0;
  c[b->index_of(5, 5, true)] = -0.4;
  c[0] = 0.2;
  auto u = [&](double r, double t) {
    return 0.2 / std::sqrt(2 * kPi) + std::pow(r, 3) * std::cos(3 * t) / std::sqrt(kPi) -
           0.4 * std::pow(r, 5) * std::sin(5 * t) / std::sqrt(kPi);
  };
  const auto prof = extend_harmonically(b, c, solid);
  for (std::size_t i = 0; i < solid->boundary.size(); ++i)
    CHECK(prof.value(0.6, i) == doctest::Approx(u(0.6, solid->boundary.longitude(i))).epsilon(1e-12));
  double prev = 0;
  for (double h : {1e-2, 5e-3}) {
    const double r = 0.6, t = 0.4;
    const double lap = (u(r + h, t) - 2 * u(r, t) + u(r - h, t)) / (h * h) + (u(r + h, t) - u(r - h, t)) / (2 * h * r) +
                       (u(r, t + h) - 2 * u(r, t) + u(r, t - h)) / (h * h * r * r);
    if (prev != 0) CHECK(std::abs(lap) < prev / 3);
    prev = std::abs(lap);
  }
}

TEST_CASE("dyadic extension bound") {
  const auto b = circle(64);
  const auto solid = std::make_shared<const SolidGrid>(make_extension_grid(*b, 4));
  const int k = 12, l = 3;
  const auto e = unit(b->size(), b->index_of(k, k, true));
  CHECK(dyadic_extension_bound(b, e, l, 2, solid) ==
        doctest::Approx(std::pow(2.0 * k + 2, -0.5) * LittlewoodPaley::beta(k / 8.0)).epsilon(1e-10));
  const auto far = unit(b->size(), b->index_of(40, 40, false));
  CHECK(dyadic_extension_bound(b, far, 2, 2, solid) == 0.0);
  CHECK_THROWS_AS(dyadic_extension_bound(b, far, 6, 2, solid), std::out_of_range);
}

TEST_CASE("interior decay") {
  const auto b = circle(64);
  const std::vector<double> deltas{0.0, 0.05, 0.1, 0.2};
  const auto prof = interior_decay_profile(*b, unit(b->size(), b->index_of(64, 64, false)), 64, deltas);
  CHECK(prof.points[0].ratio == 1.0);
  CHECK(prof.points[2].ratio == doctest::Approx(std::pow(0.9, 64)).epsilon(1e-9));
  CHECK(prof.points[2].ratio == doctest::Approx(1.18e-3).epsilon(0.01));
  CHECK(prof.rate >= 1.0);
}

TEST_CASE("Dirichlet a-priori pair") {
  const auto b = circle(24);
  const auto solid = std::make_shared<const SolidGrid>(make_extension_grid(*b, 2));
  for (int k = 0; k <= 24; ++k) {
    const auto p = dirichlet_apriori_check(b, unit(b->size(), b->index_of(k, k, false)), solid);
    CHECK(p.interior_l2 == doctest::Approx(std::pow(2.0 * k + 2, -0.5)).epsilon(1e-12));
    CHECK(p.trace_h_minus_half == doctest::Approx(std::pow(1.0 + k * k, -0.25)).epsilon(1e-12));
    CHECK(p.ratio() <= 1.0);
  }
  CHECK(dirichlet_apriori_check(b, unit(b->size(), 0), solid).ratio() == doctest::Approx(std::sqrt(0.5)));
  const auto s = sphere(6);
  const auto ss = std::make_shared<const SolidGrid>(make_extension_grid(*s, 2));
  const auto q = dirichlet_apriori_check(s, unit(s->size(), s->index_of(3, 1, true)), ss);
  CHECK(q.interior_l2 == doctest::Approx(std::pow(2.0 * 3 + 3, -0.5)).epsilon(1e-12));
}
