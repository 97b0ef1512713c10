#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "steklov/operators.hpp"

using namespace steklov;

namespace {
std::shared_ptr<const HarmonicBasis> sphere(int K) {
  return std::make_shared<const HarmonicBasis>(2, K, make_sphere_grid_for_degree(2 * K));
}
std::shared_ptr<const HarmonicBasis> circle(int K) {
  return std::make_shared<const HarmonicBasis>(1, K, make_circle_grid_for_degree(2 * K));
}
std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}
}  // namespace

TEST_CASE("model diagonal operators") {
  const auto b1 = circle(10);
  const auto dtn = assemble_dtn(b1);
  CHECK(dtn.matrix.is_diagonal());
  CHECK(dtn.matrix.entry(b1->index_of(7, 7, true), b1->index_of(7, 7, true)) == 7.0);
  const auto b2 = sphere(12);
  CHECK(assemble_dtn(b2).matrix.entry(0, 0) == 0.0);
  const auto p0 = assemble_order_zero(b2);
  const auto i10 = b2->index_of(10, 4, false);
  CHECK(p0.matrix.entry(i10, i10) == doctest::Approx(10 - std::sqrt(110.0)).epsilon(1e-14));
  CHECK(p0.matrix.entry(i10, i10) == doctest::Approx(-0.48809).epsilon(1e-5));
  for (std::size_t i = 0; i < b2->size(); ++i) CHECK(std::abs(p0.matrix.entry(i, i)) <= 0.5 + 0.01);
  const auto diff = (assemble_dtn(b2).matrix - assemble_sqrt_laplacian(b2).matrix) - p0.matrix;
  CHECK(diff.max_abs() == 0.0);
}

TEST_CASE("multiplication operators") {
  const auto b = circle(16);
  const auto c = assemble_multiplication(make_potential(1, PotentialSpec::parse("constant:2.5")), b);
  CHECK(c.matrix.is_diagonal());
  CHECK(c.matrix.entry(5, 5) == doctest::Approx(2.5));

  // cos(theta) couples only |k - k'| = 1: cos t cos kt = (cos(k-1)t + cos(k+1)t)/2.
  const auto v = assemble_multiplication(make_potential(1, PotentialSpec::parse("cos-lowfreq")), b);
  CHECK(v.symmetric);
  CHECK_FALSE(v.resolution_flag);
  const auto a = v.matrix.to_dense();
  double off = 0;
  for (std::size_t i = 0; i < b->size(); ++i)
    for (std::size_t j = 0; j < b->size(); ++j)
      if (std::abs(b->mode(i).degree - b->mode(j).degree) != 1) off = std::max(off, std::abs(a(i, j)));
  CHECK(off < 1e-12);
  CHECK(a(b->index_of(3, 3, false), b->index_of(4, 4, false)) == doctest::Approx(0.5));
  CHECK(a(0, b->index_of(1, 1, false)) == doctest::Approx(1 / std::sqrt(2.0)));

  const auto r = assemble_multiplication(make_potential(1, PotentialSpec::parse("random-lipschitz:seed=4,cap=1")), b);
  CHECK(r.matrix.symmetry_defect() <= 1e-12);

  // Zonal fast path on S^2 against the generic column-wise assembly.
  const auto s = sphere(8);
  const auto zp = make_potential(2, PotentialSpec::parse("random-lipschitz:seed=2,cap=1,zonal=1"));
  const auto fast = assemble_multiplication(zp, s).matrix.to_dense();
  const auto g = make_sphere_grid_for_degree(2 * 8 + zp.degree());
  const auto ev = s->make_evaluator(g.lattice());
  const auto vals = zp.sample(g);
  Eigen::MatrixXd slow(s->size(), s->size());
  for (std::size_t j = 0; j < s->size(); ++j) {
    std::vector<double> e(s->size(), 0.0);
    e[j] = 1;
    auto y = ev.synthesize(e);
    for (std::size_t q = 0; q < y.size(); ++q) y[q] *= vals[q] * g.weight(q);
    const auto col = ev.adjoint(y);
    for (std::size_t i = 0; i < s->size(); ++i) slow(i, j) = col[i];
  }
  CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
  const auto gp = assemble_multiplication(make_potential(2, PotentialSpec::parse("random-lipschitz:seed=2,cap=1")), s);
  CHECK(gp.matrix.symmetry_defect() < 1e-12);
}

TEST_CASE("block operator algebra") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
  a(0, 0) = 1;
  a(0, 3) = a(3, 0) = 2;
  a(1, 1) = 3;
  a(2, 4) = a(4, 2) = 1e-20;
  const auto op = BlockOperator::from_dense(a);
  CHECK(op.blocks().size() == 4);
  CHECK((op.to_dense() - a).cwiseAbs().maxCoeff() < 1e-19);
  const auto x = Eigen::VectorXd::LinSpaced(5, 1, 5);
  CHECK((op.apply(x) - op.to_dense() * x).norm() < 1e-14);
  const auto d = BlockOperator::diagonal(Eigen::VectorXd::Ones(5));
  CHECK(((op + d).to_dense() - (a + Eigen::MatrixXd::Identity(5, 5))).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(((op - d).scaled(2).to_dense() - 2 * (a - Eigen::MatrixXd::Identity(5, 5))).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("spectra of the composite operator") {
  const auto b = circle(12);
  const auto s0 = eigendecompose(assemble_dtn(b));
  CHECK(s0.pairs[0].lambda == 0.0);
  for (std::size_t j = 1; j < s0.pairs.size(); ++j) CHECK(s0.pairs[j].lambda == doctest::Approx((j + 1) / 2));

  const auto V = make_potential(1, PotentialSpec::parse("cos-lowfreq"));
  const auto op = compose_sum(assemble_dtn(b), assemble_multiplication(V, b));
  const auto sp = eigendecompose(op);
  const auto A = op.matrix.to_dense();
  Eigen::MatrixXd E(b->size(), b->size());
  for (std::size_t j = 0; j < sp.pairs.size(); ++j) {
    const auto v = sp.pairs[j].coefficients(b->size());
    for (std::size_t i = 0; i < v.size(); ++i) E(i, j) = v[i];
    CHECK(sp.pairs[j].residual < 1e-10 * std::max(1.0, std::abs(sp.pairs[j].lambda)));
    CHECK(sp.pairs[j].lambda >= -V.sup_norm() - 1e-12);
  }
  CHECK((E.transpose() * E - Eigen::MatrixXd::Identity(b->size(), b->size())).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(sp.pairs.back().truncation_flag);
  CHECK_FALSE(sp.pairs[3].truncation_flag);

  const auto P = cluster_projector(sp, 5.0);
  const auto Pd = P.op.matrix.to_dense();
  CHECK((Pd * Pd - Pd).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((A * Pd - Pd * A).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(cluster_projector(sp, 100.0).empty);
}

TEST_CASE("cluster projectors of the free operator") {
  const auto b = circle(12);
  const auto sp = eigendecompose(assemble_dtn(b));
  const auto P = cluster_projector(sp, 7.0);
  CHECK(P.members.size() == 2);
  CHECK(P.op.matrix.to_dense().trace() == doctest::Approx(2.0));

  const auto s2 = sphere(24);
  const auto sp2 = eigendecompose(assemble_dtn(s2));
  for (int k : {3, 10, 24}) {
    const auto C = cluster_projector(sp2, k);
    const auto map = SpectralMap::from_spectrum(sp2, C.members, [](double) { return std::complex<double>(1, 0); });
    const auto est = operator_norm_2_to_p(map, *s2, kInfinity, s2->grid());
    CHECK(est.exact);
    CHECK(std::abs(est.value - std::sqrt((2 * k + 1) / (4 * kPi))) < 1e-6);
  }
}

TEST_CASE("duality iteration norms") {
  const auto b = circle(8);
  std::vector<double> one(b->size(), 0.0);
  one[0] = 1;
  const auto id = SpectralMap::from_vectors(b->size(), {one});
  CHECK(operator_norm_2_to_p(id, *b, kInfinity, b->grid()).value == doctest::Approx(1 / std::sqrt(2 * kPi)));

  // Rank one projector onto a zonal harmonic: norm equals the L^p norm of the unit vector.
  const auto s = sphere(12);
  const auto z = zonal_coefficients(*s, 6, 0.3, 0.2);
  const auto rank1 = SpectralMap::from_vectors(s->size(), {z});
  const auto g = norm_grid(*s, 8);
  const auto zv = s->make_evaluator(g.lattice()).synthesize(z);
  for (double p : {3.0, 4.0, 6.0}) {
    const auto est = operator_norm_2_to_p(rank1, *s, p, g);
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(lp_norm(zv, g, p)).epsilon(1e-10));
  }

  // Far-from-spectrum resolvent is bounded by the diagonal bound times the identity scale.
  const auto sp = eigendecompose(assemble_dtn(b));
  const auto r = resolvent_norm(sp, 40.0, 4.0, norm_grid(*b, 6));
  const auto all = SpectralMap::from_spectrum(sp, std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16},
                                              [](double) { return std::complex<double>(1, 0); });
  const auto idn = operator_norm_2_to_p(all, *b, 4.0, norm_grid(*b, 6));
  CHECK(r.value <= idn.value / (40.0 - 8.0) * (1 + 1e-9));
  CHECK(std::isfinite(resolvent_norm(sp, 3.0, 4.0, norm_grid(*b, 6)).value));
  CHECK_THROWS(resolvent_norm(sp, 0.5, 4.0, norm_grid(*b, 6)));
}

TEST_CASE("spectral multipliers") {
  const auto b = circle(64);
  const auto f = random_vector(b->size(), 9);
  const auto same = apply_multiplier([](double) { return 1.0; }, 1.0, *b, f);
  CHECK(same == f);
  std::vector<double> sum(f.size(), 0.0);
  for (int l = 0; l <= 7; ++l) {
    const auto part = apply_multiplier([l](double s) { return LittlewoodPaley::beta_ell(l, s); }, 1.0, *b, f);
    for (std::size_t i = 0; i < f.size(); ++i) sum[i] += part[i];
    if (l >= 1)
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double lam = b->sqrt_eigenvalue(i);
        if (lam <= std::ldexp(1.0, l - 1) || lam >= std::ldexp(1.0, l + 1)) CHECK(part[i] == 0.0);
      }
  }
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(sum[i] - f[i]) < 1e-10);

  auto m1 = [](double s) { return std::exp(-s); };
  auto m2 = [](double s) { return 1 / (1 + s * s); };
  const auto a = apply_multiplier(m1, 3.0, *b, apply_multiplier(m2, 3.0, *b, f));
  const auto c = apply_multiplier([&](double s) { return m1(s) * m2(s); }, 3.0, *b, f);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(a[i] - c[i]) <= 4e-16 * std::abs(c[i]));
}

TEST_CASE("multiplier kernels") {
  const int K = 20;
  const auto b = circle(K);
  const auto k = multiplier_kernel([](double) { return 1.0; }, 1.0, *b);
  const auto& lat = b->grid().lattice();
  double worst = 0;
  for (std::size_t i = 0; i < lat.size(); ++i)
    for (std::size_t j = 0; j < lat.size(); ++j) {
      const double d = lat.longitudes[i] - lat.longitudes[j];
      const double dir = std::abs(std::sin(d / 2)) < 1e-14 ? (2 * K + 1) / (2 * kPi)
                                                             : std::sin((K + 0.5) * d) / std::sin(d / 2) / (2 * kPi);
      worst = std::max(worst, std::abs(k(i, j) - dir));
    }
  CHECK(worst < 1e-8);
  CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // Kernel of m(P/R) equals the basis expansion sum_j m(lambda_j/R) e_j(x) e_j(y).
  const auto s = sphere(10);
  auto heat = [](double x) { return std::exp(-x); };
  const auto ks = multiplier_kernel(heat, 2.0, *s);
  for (std::size_t x = 0; x < s->grid().size(); x += 17) {
    std::vector<double> e(s->size(), 0.0);
    const auto ev = s->make_evaluator(s->grid().lattice());
    // Column x of the kernel is the synthesis of m-weighted basis values at x.
    std::vector<double> delta(s->grid().size(), 0.0);
    delta[x] = 1.0;
    const auto yx = ev.adjoint(delta);
    const auto col = ev.synthesize(apply_multiplier(heat, 2.0, *s, yx));
    for (std::size_t y = 0; y < col.size(); ++y) CHECK(std::abs(col[y] - ks(y, x)) < 1e-12);
  }
  for (int i = 0; i < ks.rows(); ++i)
    for (int j = 0; j < ks.cols(); ++j) CHECK(ks(i, j) > 0);
}
