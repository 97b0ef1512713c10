#include "doctest.h"

#include <cmath>
#include <memory>

#include "steklov/nodal.hpp"
#include "steklov/steklov_solver.hpp"

using namespace steklov;

namespace {
std::shared_ptr<const HarmonicBasis> sphere(int K) {
  return std::make_shared<const HarmonicBasis>(2, K, make_sphere_grid_for_degree(2 * K));
}
std::shared_ptr<const HarmonicBasis> circle(int K) {
  return std::make_shared<const HarmonicBasis>(1, K, make_circle_grid_for_degree(2 * K));
}
std::vector<double> mode(const HarmonicBasis& b, int k, int m, bool sine, double scale = 1.0) {
  std::vector<double> e(b.size(), 0.0);
  e[b.index_of(k, m, sine)] = scale;
  return e;
}
}  // namespace

TEST_CASE("zeros of cos 5 theta") {
  const auto b = circle(8);
  const auto e = mode(*b, 5, 5, false, std::sqrt(kPi));  // cos 5 theta exactly
  const auto n = extract_nodal_set(b, e);
  REQUIRE(n.zeros.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(std::abs(n.zeros[i].theta - (2.0 * i + 1) * kPi / 10) < 1e-12);
    CHECK(n.zeros[i].gradient == doctest::Approx(5.0).epsilon(1e-12));
  }
  CHECK(n.regular);
  CHECK(n.measure == 10.0);
  const auto c = extract_nodal_set(b, mode(*b, 0, 0, false));
  CHECK(c.measure == 0.0);
  CHECK_THROWS(extract_nodal_set(b, std::vector<double>(b->size(), 0.0)));
  CHECK_THROWS(extract_nodal_set(b, e, 3));
}

TEST_CASE("zonal nodal lengths on the sphere") {
  const auto b = sphere(8);
  const auto n2 = extract_nodal_set(b, zonal_coefficients(*b, 2, 0.0, 0.0));
  CHECK(n2.measure == doctest::Approx(4 * kPi * std::sqrt(2.0 / 3.0)).epsilon(0.005));
  CHECK(n2.regular);
  // P_5 has roots at x = 0 and the four roots of 63x^4 - 70x^2 + 15.
  const double r1 = std::sqrt((35 - 2 * std::sqrt(70.0)) / 63), r2 = std::sqrt((35 + 2 * std::sqrt(70.0)) / 63);
  const double len5 = 2 * kPi * (1 + 2 * std::sqrt(1 - r1 * r1) + 2 * std::sqrt(1 - r2 * r2));
  CHECK(extract_nodal_set(b, zonal_coefficients(*b, 5, 0.0, 0.0)).measure == doctest::Approx(len5).epsilon(0.005));
  CHECK(extract_nodal_set(b, mode(*b, 0, 0, false)).measure == 0.0);
  // Meridians of cos(3 phi) sin^3: six half great circles through the poles.
  CHECK(extract_nodal_set(b, mode(*b, 3, 3, false)).measure == doctest::Approx(6 * kPi).epsilon(0.005));
  CHECK(nodal_refinement_change(b, zonal_coefficients(*b, 4, 0.0, 0.0)) < 0.005);
}

TEST_CASE("Gauss-Green identity") {
  const auto b = circle(8);
  const NodalWorkspace ws(b);
  const auto e = mode(*b, 2, 2, false, std::sqrt(kPi));  // cos 2 theta
  const auto n = extract_nodal_set(ws, e);
  const auto g = gauss_green_residual(ws, e, n, GreenWeight::One);
  CHECK(std::abs(g.lhs - 16.0) < 1e-8);
  CHECK(std::abs(g.rhs - 16.0) < 1e-8);

  const auto c = mode(*b, 0, 0, false);
  const auto empty = gauss_green_residual(ws, c, extract_nodal_set(ws, c), GreenWeight::One);
  CHECK(empty.lhs == 0.0);
  CHECK(std::abs(empty.rhs) < 1e-12);

  std::vector<double> mix(b->size(), 0.0);
  mix[b->index_of(3, 3, false)] = 1;
  mix[b->index_of(5, 5, true)] = 0.6;
  mix[b->index_of(1, 1, false)] = -0.3;
  const auto nm = extract_nodal_set(ws, mix);
  const auto gw = gauss_green_residual(ws, mix, nm, GreenWeight::GradWeight);
  CHECK(gw.relative_residual() < 1e-10);

  NodalSet bad = nm;
  bad.regular = false;
  CHECK_THROWS_AS(gauss_green_residual(ws, mix, bad, GreenWeight::One), std::domain_error);
}

TEST_CASE("Gauss-Green on the sphere") {
  const auto b = sphere(6);
  std::vector<double> c(b->size(), 0.0);
  c[b->index_of(4, 0, false)] = 1;
  c[b->index_of(4, 2, true)] = 0.7;
  c[b->index_of(4, 3, false)] = -0.4;
  for (int r : {8, 16}) {
    const NodalWorkspace ws(b, r);
    const auto n = extract_nodal_set(ws, c);
    CHECK(gauss_green_residual(ws, c, n, GreenWeight::One).relative_residual() < 0.02);
  }
  const NodalWorkspace w8(b, 8), w16(b, 16);
  const auto g8 = gauss_green_residual(w8, c, extract_nodal_set(w8, c), GreenWeight::GradWeight);
  const auto g16 = gauss_green_residual(w16, c, extract_nodal_set(w16, c), GreenWeight::GradWeight);
  CHECK(g8.relative_residual() < 0.02);
  CHECK(g16.relative_residual() < 0.005);
}

TEST_CASE("nodal gradient integrals on pure modes") {
  const auto b = circle(64);
  const NodalWorkspace ws(b);
  for (int k : {1, 4, 17, 64}) {
    const auto e = mode(*b, k, k, true);
    const auto n = extract_nodal_set(ws, e);
    CHECK(n.zeros.size() == static_cast<std::size_t>(2 * k));
    const auto l4 = nodal_gradient_bound(ws, e, k, n);
    CHECK(l4.nodal_gradient_integral / l4.bound == doctest::Approx(2.0).epsilon(1e-9));
    const auto l5 = nodal_gradient_sq_bound(e, k, n);
    CHECK(std::abs(l5.ratio - 2 / kPi) < 1e-6);
  }
  const auto c = mode(*b, 0, 0, false);
  const auto l4 = nodal_gradient_bound(ws, c, 0.0, extract_nodal_set(ws, c));
  CHECK(l4.nodal_gradient_integral == 0.0);
  CHECK(l4.bound == 0.0);
}

TEST_CASE("nodal measure exponent") {
  const auto b = circle(32);
  const auto s = solve_spectrum(make_potential(1, PotentialSpec::parse("zero")), b);
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : s.pairs)
    if (p.lambda >= 4 && p.lambda <= 30) pts.emplace_back(p.lambda, extract_nodal_set(b, p.coefficients(b->size())).measure);
  const auto fit = nodal_measure_exponent(pts);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS(nodal_measure_exponent({{1, 1}, {2, 2}, {3, 3}}));
}
