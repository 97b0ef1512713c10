#include "steklov/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace steklov {

double sphere_measure(int dim) {
  if (dim == 1) return 2.0 * kPi;
  if (dim == 2) return 4.0 * kPi;
  throw std::invalid_argument("sphere_measure: dim must be 1 or 2");
}

std::size_t Lattice::size() const {
  return dim == 1 ? longitudes.size() : colatitudes.size() * longitudes.size();
}

Lattice make_circle_lattice(std::size_t num_nodes) {
  Lattice lat;
  lat.dim = 1;
  lat.longitudes.resize(num_nodes);
  for (std::size_t j = 0; j < num_nodes; ++j)
    lat.longitudes[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(num_nodes);
  return lat;
}

Lattice make_sphere_lattice_with_poles(std::size_t num_lat, std::size_t num_lon) {
  if (num_lat < 2 || num_lon < 1) throw std::invalid_argument("sphere lattice too small");
  Lattice lat;
  lat.dim = 2;
  lat.colatitudes.resize(num_lat);
  for (std::size_t i = 0; i < num_lat; ++i)
    lat.colatitudes[i] = kPi * static_cast<double>(i) / static_cast<double>(num_lat - 1);
  lat.longitudes.resize(num_lon);
  for (std::size_t j = 0; j < num_lon; ++j)
    lat.longitudes[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(num_lon);
  return lat;
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) {
      p1 = x;
      p0 = 1.0;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

void gauss_jacobi_radial(std::size_t n, int power, std::vector<double>& nodes,
                         std::vector<double>& weights) {
  if (n == 0) throw std::invalid_argument("gauss_jacobi_radial: n must be positive");
  if (power < 0) throw std::invalid_argument("gauss_jacobi_radial: power must be >= 0");
  // Monic Jacobi recurrence on [-1,1] with weight (1-y)^a (1+y)^b, a = 0, b = power.
  const double a = 0.0;
  const double b = static_cast<double>(power);
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    if (k == 0)
      diag(0) = (b - a) / (a + b + 2.0);
    else
      diag(static_cast<Eigen::Index>(k)) = (b * b - a * a) / (s * (s + 2.0));
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    const double beta =
        4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    sub(static_cast<Eigen::Index>(k - 1)) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi_radial: eigensolve failed");
  // mu0 = 2^{a+b+1} Gamma(a+1) Gamma(b+1) / Gamma(a+b+2); the map r = (1+y)/2 contributes 2^{-(b+1)}.
  const double mu0_mapped = std::exp(std::lgamma(b + 1.0) - std::lgamma(b + 2.0));
  nodes.resize(n);
  weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    nodes[i] = 0.5 * (1.0 + solver.eigenvalues()(ii));
    const double v0 = solver.eigenvectors()(0, ii);
    weights[i] = mu0_mapped * v0 * v0;
  }
}

QuadratureGrid make_circle_grid(std::size_t num_nodes) {
  if (num_nodes < 4)
    throw std::invalid_argument("make_circle_grid: need at least 4 nodes, got " +
                                std::to_string(num_nodes));
  QuadratureGrid g;
  g.lattice_ = make_circle_lattice(num_nodes);
  g.weights_.assign(num_nodes, 2.0 * kPi / static_cast<double>(num_nodes));
  g.total_measure_ = 2.0 * kPi;
  g.exactness_ = static_cast<int>(num_nodes) - 1;
  return g;
}

QuadratureGrid make_sphere_grid(std::size_t num_lat, std::size_t num_lon) {
  if (num_lat < 2) throw std::invalid_argument("make_sphere_grid: num_lat must be >= 2");
  if (num_lon < 4) throw std::invalid_argument("make_sphere_grid: num_lon must be >= 4");
  QuadratureGrid g;
  std::vector<double> x, w;
  gauss_legendre(num_lat, x, w);
  g.lattice_.dim = 2;
  g.lattice_.colatitudes.resize(num_lat);
  // North pole first: colatitude ascending means cos descending.
  g.lat_weights_.resize(num_lat);
  for (std::size_t i = 0; i < num_lat; ++i) {
    g.lattice_.colatitudes[i] = std::acos(x[num_lat - 1 - i]);
    g.lat_weights_[i] = w[num_lat - 1 - i];
  }
  g.lattice_.longitudes = make_circle_lattice(num_lon).longitudes;
  const double dphi = 2.0 * kPi / static_cast<double>(num_lon);
  g.weights_.resize(num_lat * num_lon);
  for (std::size_t i = 0; i < num_lat; ++i)
    for (std::size_t j = 0; j < num_lon; ++j) g.weights_[i * num_lon + j] = g.lat_weights_[i] * dphi;
  g.total_measure_ = std::accumulate(g.weights_.begin(), g.weights_.end(), 0.0);
  g.exactness_ = static_cast<int>(std::min(2 * num_lat - 1, num_lon - 1));
  return g;
}

QuadratureGrid make_sphere_grid_for_degree(int degree) {
  const auto d = static_cast<std::size_t>(std::max(degree, 3));
  return make_sphere_grid(d / 2 + 1, d + 1);
}

QuadratureGrid make_circle_grid_for_degree(int degree) {
  return make_circle_grid(static_cast<std::size_t>(std::max(degree + 1, 4)));
}

std::vector<double> QuadratureGrid::embedding(std::size_t i) const {
  if (dim() == 1) {
    const double t = lattice_.longitudes.at(i);
    return {std::cos(t), std::sin(t)};
  }
  const double th = colatitude(i), ph = longitude(i);
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
}

double QuadratureGrid::colatitude(std::size_t i) const {
  if (dim() == 1) return kPi / 2;
  return lattice_.colatitudes.at(i / lattice_.num_lon());
}

double QuadratureGrid::longitude(std::size_t i) const {
  if (dim() == 1) return lattice_.longitudes.at(i);
  return lattice_.longitudes.at(i % lattice_.num_lon());
}

double circle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

double great_circle_distance(double colat_a, double lon_a, double colat_b, double lon_b) {
  // Haversine form keeps accuracy for nearby points.
  const double dlat = colat_a - colat_b;
  const double s1 = std::sin(0.5 * dlat);
  const double s2 = std::sin(0.5 * (lon_a - lon_b));
  const double h = s1 * s1 + std::sin(colat_a) * std::sin(colat_b) * s2 * s2;
  return 2.0 * std::asin(std::min(1.0, std::sqrt(std::max(0.0, h))));
}

double geodesic_distance(const Lattice& lattice, std::size_t i, std::size_t j) {
  if (i >= lattice.size() || j >= lattice.size())
    throw std::out_of_range("geodesic_distance: node index out of range");
  if (lattice.dim == 1) return circle_distance(lattice.longitudes[i], lattice.longitudes[j]);
  const std::size_t nl = lattice.num_lon();
  return great_circle_distance(lattice.colatitudes[i / nl], lattice.longitudes[i % nl],
                               lattice.colatitudes[j / nl], lattice.longitudes[j % nl]);
}

double geodesic_distance(const QuadratureGrid& grid, std::size_t i, std::size_t j) {
  return geodesic_distance(grid.lattice(), i, j);
}

namespace {
void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
}
}  // namespace

double lp_norm(std::span<const double> values, const QuadratureGrid& grid, double p) {
  check_p(p);
  if (values.size() != grid.size()) throw std::invalid_argument("lp_norm: length mismatch");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  const auto w = grid.weights();
  double s = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i] * values[i];
    return std::sqrt(s);
  }
  for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * std::pow(std::abs(values[i]), p);
  return std::pow(s, 1.0 / p);
}

double lp_norm_complex(std::span<const double> re, std::span<const double> im,
                       const QuadratureGrid& grid, double p) {
  check_p(p);
  if (re.size() != grid.size() || im.size() != grid.size())
    throw std::invalid_argument("lp_norm_complex: length mismatch");
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < re.size(); ++i) {
    const double a = std::hypot(re[i], im[i]);
    if (std::isinf(p))
      s = std::max(s, a);
    else
      s += w[i] * std::pow(a, p);
  }
  return std::isinf(p) ? s : std::pow(s, 1.0 / p);
}

SolidGrid make_solid_grid(QuadratureGrid boundary, std::size_t num_radial) {
  SolidGrid s{std::move(boundary), {}, {}};
  gauss_jacobi_radial(num_radial, s.boundary.dim(), s.radial_nodes, s.radial_weights);
  return s;
}

double solid_lp_norm(std::span<const DegreeComponent> components, const SolidGrid& solid, double p) {
  check_p(p);
  const std::size_t nb = solid.boundary.size();
  for (const auto& c : components)
    if (c.values.size() != nb) throw std::invalid_argument("solid_lp_norm: length mismatch");
  const auto w = solid.boundary.weights();
  std::vector<double> u(nb);
  auto evaluate_at = [&](double r) {
    std::fill(u.begin(), u.end(), 0.0);
    for (const auto& c : components) {
      const double rk = std::pow(r, c.degree);
      if (rk == 0.0) continue;
      for (std::size_t i = 0; i < nb; ++i) u[i] += rk * c.values[i];
    }
  };
  if (std::isinf(p)) {
    double m = 0.0;
    auto scan = [&](double r) {
      evaluate_at(r);
      for (double v : u) m = std::max(m, std::abs(v));
    };
    for (double r : solid.radial_nodes) scan(r);
    scan(1.0);
    return m;
  }
  auto power = [p](double a) {
    if (p == 2.0) return a * a;
    if (p == 4.0) return (a * a) * (a * a);
    if (p == 6.0) return (a * a) * (a * a) * (a * a);
    return std::pow(a, p);
  };
  double total = 0.0;
  if (components.size() == 1) {
    // Separable: int r^{kp} r^n dr times the boundary integral.
    const auto& c = components[0];
    double radial = 0.0, shell = 0.0;
    for (std::size_t q = 0; q < solid.radial_nodes.size(); ++q)
      radial += solid.radial_weights[q] * std::pow(solid.radial_nodes[q], c.degree * p);
    for (std::size_t i = 0; i < nb; ++i) shell += w[i] * power(std::abs(c.values[i]));
    return std::pow(radial * shell, 1.0 / p);
  }
  for (std::size_t q = 0; q < solid.radial_nodes.size(); ++q) {
    evaluate_at(solid.radial_nodes[q]);
    double shell = 0.0;
    for (std::size_t i = 0; i < nb; ++i) shell += w[i] * power(std::abs(u[i]));
    total += solid.radial_weights[q] * shell;
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace steklov
