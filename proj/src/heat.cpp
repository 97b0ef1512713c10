#include "steklov/heat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Sparse>

namespace steklov {

namespace {

double degree_root(int dim, int k) { return std::sqrt(HarmonicBasis::laplace_eigenvalue_of_degree(dim, k)); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("heat: alpha must lie in (0, 2]");
}

// Nodes and weights of an n-point Gauss rule on [a, b].
struct Rule {
  std::vector<double> x, w;
};

const Rule& reference_rule(std::size_t n) {
  static std::map<std::size_t, Rule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    Rule r;
    gauss_legendre(n, r.x, r.w);
    it = cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

// Points of a unit vector at distance rho, bearing psi from (colat, lon).
void offset_point(double colat, double lon, double rho, double psi, double& out_colat, double& out_lon) {
  const double y[3] = {std::sin(colat) * std::cos(lon), std::sin(colat) * std::sin(lon), std::cos(colat)};
  const double e1[3] = {std::cos(colat) * std::cos(lon), std::cos(colat) * std::sin(lon), -std::sin(colat)};
  const double e2[3] = {-std::sin(lon), std::cos(lon), 0.0};
  double z[3];
  for (int i = 0; i < 3; ++i)
    z[i] = std::cos(rho) * y[i] + std::sin(rho) * (std::cos(psi) * e1[i] + std::sin(psi) * e2[i]);
  out_colat = std::acos(std::clamp(z[2], -1.0, 1.0));
  out_lon = std::atan2(z[1], z[0]);
}

// Radial quadrature on (0, top]: geometric panels toward 0 plus extra breakpoints.
Rule radial_rule(double top, std::vector<double> breaks) {
  std::vector<double> cuts{0.0};
  for (int j = 48; j >= 0; --j) cuts.push_back(top * std::ldexp(1.0, -j));
  for (double b : breaks)
    if (b > 0.0 && b < top) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const Rule& ref = reference_rule(12);
  Rule r;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    for (std::size_t q = 0; q < ref.x.size(); ++q) {
      r.x.push_back(0.5 * (a + b) + 0.5 * (b - a) * ref.x[q]);
      r.w.push_back(0.5 * (b - a) * ref.w[q]);
    }
  }
  return r;
}

// Circle-average of |V| at distance rho from a point, times the sphere Jacobian
// (S^2), or |V(y+u)| + |V(y-u)| on S^1.
double shell_mass(const PotentialField& v, double colat, double lon, double rho) {
  if (v.dim() == 1) return std::abs(v.value_at(0.0, lon + rho)) + std::abs(v.value_at(0.0, lon - rho));
  constexpr int kPsi = 64;
  double s = 0.0;
  for (int j = 0; j < kPsi; ++j) {
    double c, l;
    offset_point(colat, lon, rho, 2.0 * kPi * j / kPsi, c, l);
    s += std::abs(v.value_at(c, l));
  }
  return s * (2.0 * kPi / kPsi) * std::sin(rho);
}

double point_colat(const Lattice& lat, std::size_t i) {
  return lat.dim == 1 ? 0.5 * kPi : lat.colatitudes[i / lat.num_lon()];
}
double point_lon(const Lattice& lat, std::size_t i) {
  return lat.dim == 1 ? lat.longitudes[i] : lat.longitudes[i % lat.num_lon()];
}

}  // namespace

double q_alpha(double alpha, int dim, double t, double d) {
  if (!(t > 0.0)) throw std::invalid_argument("q_alpha: t must be positive");
  const double on_diag = std::pow(t, -dim / alpha);
  if (d <= 0.0) return on_diag;
  return std::min(on_diag, t * std::pow(d, -dim - alpha));
}

std::vector<double> fractional_generator(const HarmonicBasis& basis, double alpha) {
  check_alpha(alpha);
  std::vector<double> g(basis.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(basis.sqrt_eigenvalue(i), alpha);
  return g;
}

double heat_tail(int dim, double alpha, int max_degree, double t) {
  return std::exp(-t * std::pow(degree_root(dim, max_degree), alpha));
}

int heat_degree_for(int dim, double alpha, double t, double tail) {
  check_alpha(alpha);
  if (!(t > 0.0)) throw std::invalid_argument("heat_degree_for: t must be positive");
  int k = 1;
  while (heat_tail(dim, alpha, k, t) >= tail) k = k < 64 ? k + 1 : k + k / 8;
  while (k > 1 && heat_tail(dim, alpha, k - 1, t) < tail) --k;
  return k;
}

namespace {

// e^{-t lambda_k^alpha} times the addition-theorem factor, k = 0..K
std::vector<double> heat_weights(double alpha, int dim, int K, double t) {
  std::vector<double> w(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    const double e = std::exp(-t * std::pow(degree_root(dim, k), alpha));
    w[static_cast<std::size_t>(k)] = dim == 1 ? (k == 0 ? 1.0 : 2.0) * e / (2.0 * kPi) : (2.0 * k + 1.0) * e / (4.0 * kPi);
  }
  return w;
}

double kernel_from_weights(const std::vector<double>& w, int dim, double d) {
  const std::size_t K = w.size() - 1;
  double s = w[0];
  if (dim == 1) {
    // cos(kd) by rotation, re-seeded every 64 terms
    const double c1 = std::cos(d), s1 = std::sin(d);
    double ck = 1.0, sk = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
      if (k % 64 == 0) {
        ck = std::cos(static_cast<double>(k) * d);
        sk = std::sin(static_cast<double>(k) * d);
      } else {
        const double c = ck * c1 - sk * s1;
        sk = sk * c1 + ck * s1;
        ck = c;
      }
      s += w[k] * ck;
    }
    return s;
  }
  const double x = std::cos(d);
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 1; k <= K; ++k) {
    if (k >= 2) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    s += w[k] * p1;
  }
  return s;
}

}  // namespace

double base_heat_kernel_at(double alpha, int dim, int max_degree, double t, double distance) {
  check_alpha(alpha);
  if (heat_tail(dim, alpha, max_degree, t) > 1e-14)
    throw std::domain_error("base_heat_kernel_at: truncation tail above 1e-14");
  return kernel_from_weights(heat_weights(alpha, dim, max_degree, t), dim, distance);
}

Eigen::MatrixXd base_heat_kernel(double alpha, double t, const Lattice& lattice, int max_degree) {
  check_alpha(alpha);
  const int dim = lattice.dim;
  const int K = max_degree < 0 ? heat_degree_for(dim, alpha, t) : max_degree;
  if (heat_tail(dim, alpha, K, t) > 1e-14) throw std::domain_error("base_heat_kernel: truncation tail above 1e-14");
  const auto w = heat_weights(alpha, dim, K, t);
  const auto n = static_cast<Eigen::Index>(lattice.size());
  Eigen::MatrixXd p(n, n);
  const std::size_t nlon = lattice.num_lon();
  // The distance depends only on the latitude pair and the longitude offset.
  std::unordered_map<std::size_t, double> cache;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) {
      const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      const std::size_t dj = (ua % nlon + nlon - ub % nlon) % nlon;
      const std::size_t key = dim == 1 ? dj : ((ua / nlon) * lattice.num_lat() + ub / nlon) * nlon + dj;
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, kernel_from_weights(w, dim, geodesic_distance(lattice, ua, ub))).first;
      p(a, b) = p(b, a) = it->second;
    }
  return p;
}

// ---------------------------------------------------------------------------

double three_p_ratio(double alpha, int dim, double t, double s, double dxz, double dzy, double dxy) {
  const double a = q_alpha(alpha, dim, t, dxz), b = q_alpha(alpha, dim, s, dzy);
  return a * b / (q_alpha(alpha, dim, s + t, dxy) * (a + b));
}

ThreePResult check_3p(double alpha, const Lattice& lattice, std::size_t samples, std::uint64_t seed) {
  check_alpha(alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> node(0, lattice.size() - 1);
  ThreePResult r;
  r.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = 1.0 - unit(rng), s = 1.0 - unit(rng);  // (0, 1]
    const std::size_t x = node(rng), z = node(rng), y = node(rng);
    const double dxz = geodesic_distance(lattice, x, z), dzy = geodesic_distance(lattice, z, y),
                 dxy = geodesic_distance(lattice, x, y);
    const double v = three_p_ratio(alpha, lattice.dim, t, s, dxz, dzy, dxy);
    if (v > r.max_ratio) {
      r.max_ratio = v;
      r.t = t;
      r.s = s;
      r.dxz = dxz;
      r.dzy = dzy;
      r.dxy = dxy;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

double kato_weight(double alpha, int dim, double d) {
  if (alpha < dim) return std::pow(d, alpha - dim);
  if (alpha == dim) return std::log(2.0 + 1.0 / d);
  return 1.0;
}

double kato_time_integral(double alpha, int dim, double t, double d) {
  const double e = 1.0 - dim / alpha;
  auto F = [&](double r) { return dim == alpha ? std::log(r) : std::pow(r, e) / e; };
  if (d <= 0.0) return dim < alpha ? F(t) : kInfinity;
  const double cross = std::pow(d, alpha);  // where t d^{-n-alpha} meets t^{-n/alpha}
  if (t <= cross) return t * t / (2.0 * std::pow(d, dim + alpha));
  // Written in powers of d directly so tiny d does not underflow.
  const double f_cross = dim == alpha ? alpha * std::log(d) : std::pow(d, alpha - dim) / e;
  return 0.5 * std::pow(d, alpha - dim) + F(t) - f_cross;
}

KatoModulus kato_modulus(const PotentialField& potential, double alpha, const std::vector<double>& times,
                         const Lattice& points) {
  check_alpha(alpha);
  if (points.dim != potential.dim()) throw std::invalid_argument("kato_modulus: dimension mismatch");
  KatoModulus km;
  km.alpha = alpha;
  km.times = times;
  km.values.assign(times.size(), 0.0);
  km.argmax.assign(times.size(), 0);
  const int n = potential.dim();
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const double t = times[ti];
    const Rule rule = radial_rule(kPi, {std::pow(t, 1.0 / alpha)});
    for (std::size_t y = 0; y < points.size(); ++y) {
      const double c = point_colat(points, y), l = point_lon(points, y);
      double s = 0.0;
      for (std::size_t q = 0; q < rule.x.size(); ++q)
        s += rule.w[q] * kato_time_integral(alpha, n, t, rule.x[q]) * shell_mass(potential, c, l, rule.x[q]);
      if (s > km.values[ti]) {
        km.values[ti] = s;
        km.argmax[ti] = y;
      }
    }
  }
  return km;
}

double kato_class_integral(const PotentialField& potential, double alpha, double radius, const Lattice& points) {
  check_alpha(alpha);
  const double top = std::min(radius, kPi);
  const Rule rule = radial_rule(top, {});
  double best = 0.0;
  for (std::size_t y = 0; y < points.size(); ++y) {
    const double c = point_colat(points, y), l = point_lon(points, y);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.x.size(); ++q)
      s += rule.w[q] * kato_weight(alpha, potential.dim(), rule.x[q]) * shell_mass(potential, c, l, rule.x[q]);
    best = std::max(best, s);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Duhamel iteration. Theta_0(r) = e^{-rG}; Theta_m(r) = -int_0^r e^{-(r-s)G} M Theta_{m-1}(s) ds.
// Time is discretized by graded Gauss panels; Theta_{m-1} is interpolated on each panel
// and the exponential factor is integrated exactly-ish per eigenvalue.

namespace {

constexpr std::size_t kPanelNodes = 8;

struct TimeMesh {
  std::vector<double> cuts;   // panel boundaries, cuts[0] = 0, back = t
  std::vector<double> nodes;  // kPanelNodes per panel
};

TimeMesh make_time_mesh(double t, int panels, double grading) {
  TimeMesh m;
  m.cuts.push_back(0.0);
  for (int i = 1; i <= panels; ++i) m.cuts.push_back(t * std::exp2(-grading * (panels - i) / panels));
  const Rule& ref = reference_rule(kPanelNodes);
  for (int p = 0; p < panels; ++p) {
    const double a = m.cuts[static_cast<std::size_t>(p)], b = m.cuts[static_cast<std::size_t>(p) + 1];
    for (double x : ref.x) m.nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * x);
  }
  return m;
}

// W(i, j) ~ int_0^{r_i} e^{-(r_i - s) mu} L_j(s) ds, targets r_i = nodes then t.
Eigen::MatrixXd exponential_weights(const TimeMesh& mesh, double mu) {
  const std::size_t N = mesh.nodes.size(), P = mesh.cuts.size() - 1;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N + 1), static_cast<Eigen::Index>(N));
  const Rule& sub = reference_rule(16);
  for (std::size_t i = 0; i <= N; ++i) {
    const double r = i < N ? mesh.nodes[i] : mesh.cuts.back();
    for (std::size_t p = 0; p < P; ++p) {
      const double a = mesh.cuts[p];
      if (a >= r) break;
      const double u = std::min(mesh.cuts[p + 1], r);
      if ((r - u) * mu > 40.0) continue;
      const double* xs = &mesh.nodes[p * kPanelNodes];
      std::vector<double> cuts{a, u};
      if (mu > 0.0)
        for (double c : {0.5, 2.0, 8.0, 32.0}) {
          const double s = r - c / mu;
          if (s > a && s < u) cuts.push_back(s);
        }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        for (std::size_t q = 0; q < sub.x.size(); ++q) {
          const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * sub.x[q];
          const double f = 0.5 * (hi - lo) * sub.w[q] * std::exp(-(r - s) * mu);
          for (std::size_t j = 0; j < kPanelNodes; ++j) {
            double l = 1.0;
            for (std::size_t m = 0; m < kPanelNodes; ++m)
              if (m != j) l *= (s - xs[m]) / (xs[j] - xs[m]);
            W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p * kPanelNodes + j)) += f * l;
          }
        }
      }
    }
  }
  return W;
}

// Series state for one block of M: rows/cols `idx`, S(a, j*nb + b) = Theta(s_j)[a, b].
struct BlockSeries {
  std::vector<std::size_t> idx;
  Eigen::SparseMatrix<double> M;
  std::vector<const Eigen::MatrixXd*> weights;
  Eigen::MatrixXd S;
  Eigen::MatrixXd last;  // Theta_m(t) on the block

  BlockSeries(const BlockOperator::Block& blk, const std::vector<double>& gen, const TimeMesh& mesh,
              std::map<double, Eigen::MatrixXd>& cache)
      : idx(blk.indices) {
    const auto nb = static_cast<Eigen::Index>(idx.size());
    const auto N = static_cast<Eigen::Index>(mesh.nodes.size());
    const double cut = 1e-15 * blk.matrix.cwiseAbs().maxCoeff();
    M = blk.matrix.sparseView(1.0, cut);
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double mu = gen[idx[a]];
      auto it = cache.find(mu);
      if (it == cache.end()) it = cache.emplace(mu, exponential_weights(mesh, mu)).first;
      weights.push_back(&it->second);
    }
    S = Eigen::MatrixXd::Zero(nb, N * nb);
    for (Eigen::Index a = 0; a < nb; ++a)
      for (Eigen::Index j = 0; j < N; ++j)
        S(a, j * nb + a) = std::exp(-mesh.nodes[static_cast<std::size_t>(j)] * gen[idx[static_cast<std::size_t>(a)]]);
  }

  void advance() {
    const Eigen::Index nb = S.rows(), N = S.cols() / nb;
    const Eigen::MatrixXd H = M * S;
    Eigen::MatrixXd next(nb, N * nb);
    last.resize(nb, nb);
    Eigen::VectorXd row(N * nb);
    for (Eigen::Index a = 0; a < nb; ++a) {
      row = H.row(a).transpose();
      const Eigen::Map<const Eigen::MatrixXd> h(row.data(), nb, N);
      const Eigen::MatrixXd r = -(h * weights[static_cast<std::size_t>(a)]->transpose());  // nb x (N+1)
      next.row(a) = Eigen::Map<const Eigen::RowVectorXd>(r.data(), N * nb);
      last.row(a) = r.col(N).transpose();
    }
    S.swap(next);
  }
};

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

Eigen::MatrixXd synthesis_matrix(const HarmonicBasis& basis, const Lattice& lattice) {
  const Evaluator ev = basis.make_evaluator(lattice);
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(lattice.size()), static_cast<Eigen::Index>(basis.size()));
  std::vector<double> e(basis.size(), 0.0);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    e[k] = 1.0;
    const auto v = ev.synthesize(e);
    for (std::size_t i = 0; i < v.size(); ++i) Y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[i];
    e[k] = 0.0;
  }
  return Y;
}

PicardResult picard_heat_kernel(const std::vector<double>& generator, const BoundaryOperator& multiplication,
                                double t, const PicardOptions& options) {
  const auto& basis = *multiplication.basis;
  if (generator.size() != basis.size()) throw std::invalid_argument("picard_heat_kernel: generator length mismatch");
  if (!(t > 0.0)) throw std::invalid_argument("picard_heat_kernel: t must be positive");
  const double gmax = *std::max_element(generator.begin(), generator.end());
  if (std::exp(-t * gmax) > 1e-10)
    throw std::domain_error("picard_heat_kernel: basis too small for this t (tail above 1e-10)");

  const auto n = static_cast<Eigen::Index>(basis.size());
  PicardResult res;
  res.t = t;
  const Eigen::MatrixXd Y = synthesis_matrix(basis, basis.grid().lattice());
  Eigen::VectorXd a0(n);
  for (Eigen::Index i = 0; i < n; ++i) a0(i) = std::exp(-t * generator[static_cast<std::size_t>(i)]);
  res.free_kernel = Y * a0.asDiagonal() * Y.transpose();
  const double p0max = max_abs(res.free_kernel);

  const auto& blocks = multiplication.matrix.blocks();
  const double mmax = multiplication.matrix.max_abs();
  if (mmax == 0.0) {
    res.coefficients = a0.asDiagonal();
    res.kernel = res.free_kernel;
    res.converged = true;
    res.contracted = true;
    res.time_nodes = 0;
    return res;
  }

  Eigen::MatrixXd previous;
  bool have_previous = false;
  for (int panels = options.initial_panels; panels <= options.max_panels; panels *= 2) {
    const TimeMesh mesh = make_time_mesh(t, panels, options.grading);
    std::map<double, Eigen::MatrixXd> cache;
    std::vector<BlockSeries> series;
    series.reserve(blocks.size());
    for (const auto& blk : blocks) series.emplace_back(blk, generator, mesh, cache);
    res.theta_norms.clear();
    res.ratios.clear();
    res.pointwise_ratios.clear();
    res.converged = false;
    Eigen::MatrixXd total = a0.asDiagonal();
    for (int m = 1; m <= options.max_iterations; ++m) {
      Eigen::MatrixXd term = Eigen::MatrixXd::Zero(n, n);
      for (auto& bs : series) {
        bs.advance();
        for (std::size_t a = 0; a < bs.idx.size(); ++a)
          for (std::size_t b = 0; b < bs.idx.size(); ++b)
            term(static_cast<Eigen::Index>(bs.idx[a]), static_cast<Eigen::Index>(bs.idx[b])) =
                bs.last(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
      total += term;
      const Eigen::MatrixXd km = Y * term * Y.transpose();
      const double nm = max_abs(km);
      if (!res.theta_norms.empty())
        res.ratios.push_back(res.theta_norms.back() > 0 ? nm / res.theta_norms.back() : 0.0);
      res.theta_norms.push_back(nm);
      double pr = 0.0;
      for (Eigen::Index i = 0; i < km.rows(); ++i)
        for (Eigen::Index j = 0; j < km.cols(); ++j)
          if (res.free_kernel(i, j) > 1e-3 * p0max) pr = std::max(pr, std::abs(km(i, j)) / res.free_kernel(i, j));
      res.pointwise_ratios.push_back(pr);
      if (nm / p0max < options.tolerance) {
        res.converged = true;
        break;
      }
    }
    res.iterations = static_cast<int>(res.theta_norms.size());
    res.coefficients = total;
    res.kernel = Y * total * Y.transpose();
    res.time_nodes = static_cast<int>(mesh.nodes.size());
    if (have_previous) {
      res.refinement_change = max_abs(res.kernel - previous) / p0max;
      if (res.refinement_change < options.refine_tolerance) break;
    }
    previous = res.kernel;
    have_previous = true;
  }
  res.contracted = std::all_of(res.ratios.begin(), res.ratios.end(), [](double r) { return r <= 1.0 / 3.0; });
  return res;
}

PicardResult picard_heat_kernel(const PotentialField& potential, double alpha,
                                std::shared_ptr<const HarmonicBasis> basis, double t, const PicardOptions& options) {
  return picard_heat_kernel(fractional_generator(*basis, alpha), assemble_multiplication(potential, basis), t,
                            options);
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd compose_kernels(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const QuadratureGrid& grid) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) w(static_cast<Eigen::Index>(i)) = grid.weight(i);
  return a * w.asDiagonal() * b;
}

void extend_semigroup(HeatKernelGrid& kernels, int doublings) {
  if (kernels.kernels.empty()) throw std::invalid_argument("extend_semigroup: no kernel to extend");
  for (int i = 0; i < doublings; ++i) {
    const Eigen::MatrixXd& last = kernels.kernels.back();
    Eigen::MatrixXd next = compose_kernels(last, last, kernels.grid);
    kernels.times.push_back(2.0 * kernels.times.back());
    kernels.kernels.push_back(std::move(next));
    kernels.provenance.emplace_back("semigroup");
  }
}

double semigroup_defect(const Eigen::MatrixXd& pt, const Eigen::MatrixXd& ps, const Eigen::MatrixXd& pts,
                        const QuadratureGrid& grid) {
  return max_abs(compose_kernels(pt, ps, grid) - pts) / max_abs(pts);
}

std::vector<EnvelopeRow> two_sided_bound_report(const HeatKernelGrid& kernels, double exclusion) {
  const auto& lat = kernels.grid.lattice();
  if (exclusion < 0.0) exclusion = kernels.dim == 2 ? 2.0 * kPi / static_cast<double>(lat.num_lat()) : 0.0;
  std::vector<EnvelopeRow> rows;
  for (std::size_t k = 0; k < kernels.times.size(); ++k) {
    EnvelopeRow row;
    row.t = kernels.times[k];
    row.inf_ratio = kInfinity;
    const auto& p = kernels.kernels[k];
    for (Eigen::Index i = 0; i < p.rows(); ++i)
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double d = geodesic_distance(lat, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (kernels.dim == 2 && d < exclusion) continue;
        const double r = p(i, j) / q_alpha(kernels.alpha, kernels.dim, row.t, d);
        row.sup_ratio = std::max(row.sup_ratio, r);
        row.inf_ratio = std::min(row.inf_ratio, r);
        ++row.pairs;
      }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace steklov
