#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <memory>

#include "steklov/heat.hpp"

using namespace steklov;

namespace {
std::shared_ptr<const HarmonicBasis> circle(int K) {
  return std::make_shared<const HarmonicBasis>(1, K, make_circle_grid_for_degree(2 * K));
}

// Periodized Cauchy kernel: e^{-t|D|} on the circle.
double poisson(double t, double theta) { return std::sinh(t) / (std::cosh(t) - std::cos(theta)) / (2.0 * kPi); }

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double row_mass(const Eigen::MatrixXd& p, const QuadratureGrid& g, Eigen::Index row) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < p.cols(); ++j) s += p(row, j) * g.weight(static_cast<std::size_t>(j));
  return s;
}
}  // namespace

TEST_CASE("comparison kernel") {
  CHECK(q_alpha(1.0, 1, 0.1, 1.0) == doctest::Approx(0.1));
  CHECK(q_alpha(1.0, 1, 0.1, 0.0) == doctest::Approx(10.0));
  CHECK(q_alpha(0.5, 2, 0.25, 0.0) == doctest::Approx(std::pow(0.25, -4.0)));
  // Continuous at the crossing d = t^{1/alpha}, decreasing in d.
  for (double a : {0.5, 1.0, 1.5})
    for (int n : {1, 2}) {
      const double t = 0.3, d = std::pow(t, 1.0 / a);
      CHECK(t * std::pow(d, -n - a) == doctest::Approx(std::pow(t, -n / a)));
      CHECK(q_alpha(a, n, t, d * (1 - 1e-9)) == doctest::Approx(q_alpha(a, n, t, d * (1 + 1e-9))));
      double prev = kInfinity;
      for (double x = 0.0; x < 3.0; x += 0.05) {
        const double q = q_alpha(a, n, t, x);
        CHECK(q > 0.0);
        CHECK(q <= prev);
        prev = q;
      }
    }
  CHECK_THROWS(q_alpha(1.0, 1, 0.0, 1.0));
  ComparisonKernel q{1.5, 2};
  CHECK(q(0.2, 0.7) == q_alpha(1.5, 2, 0.2, 0.7));
}

TEST_CASE("base kernel against the Poisson kernel") {
  const double t = 0.5;
  const int K = heat_degree_for(1, 1.0, t);
  CHECK(heat_tail(1, 1.0, K, t) < 1e-14);
  CHECK(heat_tail(1, 1.0, K - 1, t) >= 1e-14);
  for (double th : {0.0, 0.1, 1.0, 2.5, kPi}) CHECK(base_heat_kernel_at(1.0, 1, K, t, th) == doctest::Approx(poisson(t, th)).epsilon(1e-12));

  const auto grid = make_circle_grid(static_cast<std::size_t>(2 * K + 1));
  const Eigen::MatrixXd p = base_heat_kernel(1.0, t, grid.lattice(), K);
  CHECK(max_abs(p - p.transpose()) <= 1e-12);
  CHECK(p.minCoeff() > 0.0);
  for (Eigen::Index i = 0; i < p.rows(); i += 17) CHECK(std::abs(row_mass(p, grid, i) - 1.0) < 1e-10);

  CHECK_THROWS_AS(base_heat_kernel_at(1.0, 1, 20, 0.01, 0.3), std::domain_error);
  // Large t: only the constant survives.
  CHECK(base_heat_kernel_at(1.0, 1, 60, 40.0, 1.0) == doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-12));
  CHECK(base_heat_kernel_at(1.5, 2, 60, 40.0, 2.0) == doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-12));
}

TEST_CASE("base kernel on the sphere") {
  const double t = 0.2, a = 1.5;
  const int K = heat_degree_for(2, a, t);
  // Mass on a grid exact to degree K.
  const auto grid = make_sphere_grid_for_degree(K);
  double s = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    s += grid.weight(j) * base_heat_kernel_at(a, 2, K, t, great_circle_distance(0.3, 0.2, grid.colatitude(j), grid.longitude(j)));
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  // Lattice version reproduces pointwise evaluation.
  const auto small = make_sphere_grid(6, 12);
  const Eigen::MatrixXd p = base_heat_kernel(a, t, small.lattice(), K);
  for (std::size_t i = 0; i < small.size(); i += 7)
    for (std::size_t j = 0; j < small.size(); j += 5)
      CHECK(p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
            doctest::Approx(base_heat_kernel_at(a, 2, K, t, geodesic_distance(small, i, j))).epsilon(1e-13));
  CHECK(p.minCoeff() > 0.0);
}

TEST_CASE("3P inequality") {
  for (double a : {0.5, 1.0, 1.5})
    for (int n : {1, 2}) CHECK(three_p_ratio(a, n, 0.3, 0.3, 0, 0, 0) == doctest::Approx(std::pow(2.0, n / a - 1)));
  const auto lat = make_circle_lattice(256);
  for (double a : {0.5, 1.0, 1.5}) {
    const auto r1 = check_3p(a, lat, 20000, 3);
    const auto r2 = check_3p(a, lat, 40000, 3);
    CHECK(std::isfinite(r1.max_ratio));
    CHECK(r2.max_ratio >= r1.max_ratio);
    CHECK(r2.max_ratio <= 1.1 * r1.max_ratio);
    CHECK(three_p_ratio(a, 1, r2.t, r2.s, r2.dxz, r2.dzy, r2.dxy) == doctest::Approx(r2.max_ratio));
  }
}

TEST_CASE("Kato time integral and modulus") {
  // Closed form against quadrature of min(r^{-n/a}, r d^{-n-a}).
  for (double a : {0.5, 1.0, 1.5})
    for (int n : {1, 2})
      for (double d : {0.05, 0.4, 1.3}) {
        const double t = 0.7;
        const double cut = std::min(t, std::pow(d, a));
        auto f = [&](double r) { return q_alpha(a, n, r, d); };
        double direct = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, cut, 15, 1e-13);
        if (cut < t) direct += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cut, t, 15, 1e-13);
        CHECK(kato_time_integral(a, n, t, d) == doctest::Approx(direct).epsilon(1e-9));
      }
  CHECK(kato_time_integral(1.5, 1, 0.5, 0.0) == doctest::Approx(std::pow(0.5, 1.0 / 3.0) * 3.0));
  CHECK(std::isinf(kato_time_integral(1.0, 1, 0.5, 0.0)));
  CHECK(kato_weight(0.5, 1, 0.25) == doctest::Approx(2.0));
  CHECK(kato_weight(1.0, 1, 0.5) == doctest::Approx(std::log(4.0)));
  CHECK(kato_weight(1.5, 1, 0.5) == 1.0);

  const std::vector<double> ts{1.0 / 64, 1.0 / 16, 0.25, 1.0};
  const auto one = make_potential(1, PotentialSpec::parse("constant:1"));
  const auto km = kato_modulus(one, 1.0, ts, make_circle_lattice(3));
  // Independent oracle: nested adaptive quadrature of q over (u, r).
  boost::math::quadrature::tanh_sinh<double> ts_rule;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    auto inner = [&](double u) {
      auto g = [&](double r) { return q_alpha(1.0, 1, r, u); };
      using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
      if (u >= t) return GK::integrate(g, 0.0, t, 8, 1e-8);
      return GK::integrate(g, 0.0, u, 8, 1e-8) + GK::integrate(g, u, t, 8, 1e-8);  // kink at r = u
    };
    const double oracle = 2.0 * ts_rule.integrate(inner, 0.0, kPi, 1e-6);
    CHECK(km.values[i] == doctest::Approx(oracle).epsilon(0.01));
    if (i > 0) CHECK(km.values[i] > km.values[i - 1]);
  }
  CHECK(km.values.front() < km.values.back() / 4);

  const auto zero = make_potential(1, PotentialSpec::parse("zero"));
  for (double c : kato_modulus(zero, 0.5, ts, make_circle_lattice(4)).values) CHECK(c == 0.0);
  CHECK_THROWS(kato_modulus(one, 2.5, ts, make_circle_lattice(4)));

  // On S^2 with V = 1 the modulus is independent of the base point.
  const auto one2 = make_potential(2, PotentialSpec::parse("constant:1"));
  Lattice pts;
  pts.dim = 2;
  pts.colatitudes = {0.0, 1.0, 2.0};
  pts.longitudes = {0.0, 2.0};
  const auto k2 = kato_modulus(one2, 1.5, {0.1}, pts);
  auto inner2 = [&](double rho) { return rho <= 0.0 ? 0.0 : kato_time_integral(1.5, 2, 0.1, rho) * 2 * kPi * std::sin(rho); };
  CHECK(k2.values[0] == doctest::Approx(ts_rule.integrate(inner2, 0.0, kPi)).epsilon(1e-3));

  CHECK(kato_class_integral(one, 0.5, 0.5, make_circle_lattice(4)) == doctest::Approx(4.0 * std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("Picard kernel: closed forms") {
  const auto basis = circle(100);
  const double t = 0.25;
  const auto zero = make_potential(1, PotentialSpec::parse("zero"));
  const auto r0 = picard_heat_kernel(zero, 1.0, basis, t);
  CHECK(max_abs(r0.kernel - r0.free_kernel) == 0.0);
  // Free kernel is the Poisson kernel on the grid.
  const auto& g = basis->grid();
  CHECK(r0.free_kernel(0, 5) == doctest::Approx(poisson(t, geodesic_distance(g, 0, 5))).epsilon(1e-9));

  const double c = 1.7;
  const auto vc = make_potential(1, PotentialSpec::parse("constant:1.7"));
  const auto rc = picard_heat_kernel(vc, 1.0, basis, t);
  CHECK(rc.converged);
  CHECK(max_abs(rc.kernel - std::exp(-c * t) * rc.free_kernel) / max_abs(rc.free_kernel) < 1e-6);
  // Theta_m = (-ct)^m / m! p0 exactly, so consecutive ratios are ct / (m+1).
  REQUIRE(rc.ratios.size() >= 3);
  for (std::size_t m = 0; m < 3; ++m) CHECK(rc.ratios[m] == doctest::Approx(c * t / (m + 2)).epsilon(1e-6));

  const auto cosv = make_potential(1, PotentialSpec::parse("cos-lowfreq"));
  const auto rv = picard_heat_kernel(cosv, 1.0, basis, t);
  CHECK(rv.converged);
  CHECK(rv.contracted);
  const Eigen::MatrixXd M = assemble_multiplication(cosv, basis).matrix.to_dense();
  const auto gen = fractional_generator(*basis, 1.0);
  Eigen::MatrixXd H = M;
  for (Eigen::Index i = 0; i < H.rows(); ++i) H(i, i) += gen[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::MatrixXd E = es.eigenvectors() * (-t * es.eigenvalues().array()).exp().matrix().asDiagonal() *
                            es.eigenvectors().transpose();
  const Eigen::MatrixXd Y = synthesis_matrix(*basis, g.lattice());
  const Eigen::MatrixXd oracle = Y * E * Y.transpose();
  CHECK(max_abs(rv.kernel - oracle) / max_abs(oracle) < 1e-4);
  CHECK(max_abs(rv.kernel - rv.kernel.transpose()) / max_abs(oracle) < 1e-10);
  CHECK(rv.kernel.minCoeff() > 0.0);

  // A basis too small for t is rejected.
  CHECK_THROWS_AS(picard_heat_kernel(cosv, 1.0, circle(20), t), std::domain_error);
}

TEST_CASE("semigroup extension") {
  const double t = 0.125;
  const int K = heat_degree_for(1, 1.0, t);
  const auto grid = make_circle_grid(static_cast<std::size_t>(2 * K + 1));
  HeatKernelGrid hk;
  hk.alpha = 1.0;
  hk.dim = 1;
  hk.grid = grid;
  hk.times = {t};
  hk.kernels = {base_heat_kernel(1.0, t, grid.lattice(), K)};
  hk.provenance = {"base"};
  extend_semigroup(hk, 0);
  CHECK(hk.kernels.size() == 1);
  extend_semigroup(hk, 3);
  REQUIRE(hk.times.size() == 4);
  CHECK(hk.times.back() == doctest::Approx(1.0));
  for (std::size_t k = 1; k < hk.times.size(); ++k) {
    const Eigen::MatrixXd ref = base_heat_kernel(1.0, hk.times[k], grid.lattice(), K);
    CHECK(max_abs(hk.kernels[k] - ref) / max_abs(ref) < 1e-8);
    CHECK(max_abs(hk.kernels[k] - hk.kernels[k].transpose()) < 1e-12);
    CHECK(std::abs(row_mass(hk.kernels[k], grid, 3) - 1.0) < 1e-8);
    CHECK(hk.provenance[k] == "semigroup");
  }
  CHECK(semigroup_defect(hk.kernels[0], hk.kernels[0], hk.kernels[1], grid) < 1e-12);

  // Constant potential: doubling e^{-ct} p0(t) gives e^{-2ct} p0(2t).
  const auto basis = circle(100);
  const auto vc = make_potential(1, PotentialSpec::parse("constant:-2"));
  const auto rc = picard_heat_kernel(vc, 1.0, basis, 0.25);
  HeatKernelGrid hv;
  hv.grid = basis->grid();
  hv.times = {0.25};
  hv.kernels = {rc.kernel};
  hv.provenance = {"picard"};
  extend_semigroup(hv, 1);
  const Eigen::MatrixXd ref = std::exp(2.0 * 0.5) * base_heat_kernel(1.0, 0.5, basis->grid().lattice(), 100);
  CHECK(max_abs(hv.kernels[1] - ref) / max_abs(ref) < 1e-6);
}

TEST_CASE("two-sided envelope") {
  HeatKernelGrid hk;
  hk.alpha = 1.0;
  hk.dim = 1;
  hk.grid = make_circle_grid(64);
  for (int j = 3; j <= 7; ++j) {
    const double t = std::ldexp(1.0, -j);
    hk.times.push_back(t);
    hk.kernels.push_back(base_heat_kernel(1.0, t, hk.grid.lattice()));
    hk.provenance.emplace_back("base");
  }
  const auto rows = two_sided_bound_report(hk);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    CHECK(r.inf_ratio > 0.1);
    CHECK(r.sup_ratio < 20.0);
    CHECK(r.pairs == 64u * 65u / 2u);
    // Diagonal: p(t,x,x) t^{n/alpha} -> 1/pi as t -> 0.
  }
  const double diag = hk.kernels.back()(0, 0) * hk.times.back();
  CHECK(diag == doctest::Approx(1.0 / kPi).epsilon(0.01));

  // Large negative constant: the envelope scales by e^{|c| t}.
  HeatKernelGrid neg = hk;
  for (std::size_t k = 0; k < neg.times.size(); ++k) neg.kernels[k] *= std::exp(5.0 * neg.times[k]);
  const auto nrows = two_sided_bound_report(neg);
  for (std::size_t k = 0; k < rows.size(); ++k)
    CHECK(nrows[k].sup_ratio / rows[k].sup_ratio == doctest::Approx(std::exp(5.0 * rows[k].t)));

  // S^2 exclusion skips near-diagonal pairs.
  HeatKernelGrid s2;
  s2.alpha = 1.0;
  s2.dim = 2;
  s2.grid = make_sphere_grid(8, 16);
  s2.times = {0.25};
  s2.kernels = {base_heat_kernel(1.0, 0.25, s2.grid.lattice())};
  const auto all = two_sided_bound_report(s2, 0.0);
  const auto cut = two_sided_bound_report(s2);
  CHECK(all[0].pairs == 128u * 129u / 2u);
  CHECK(cut[0].pairs < all[0].pairs);
  CHECK(cut[0].inf_ratio > 0.0);
}
