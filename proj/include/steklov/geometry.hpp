#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace steklov {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Surface measure of the unit sphere S^n for n = 1, 2.
double sphere_measure(int dim);

/// Tensor lattice of evaluation points on S^1 or S^2.
///
/// On S^1 only `longitudes` is populated (the angle theta). On S^2 points are
/// stored latitude-major: index = i * longitudes.size() + j, with colatitude
/// `colatitudes[i]` and longitude `longitudes[j]`.
struct Lattice {
  int dim = 1;
  std::vector<double> colatitudes;
  std::vector<double> longitudes;

  std::size_t size() const;
  std::size_t num_lat() const { return dim == 1 ? 1 : colatitudes.size(); }
  std::size_t num_lon() const { return longitudes.size(); }
};

/// Lattice on S^2 including both poles: colatitudes i*pi/(num_lat-1).
/// Used for sup-norm searches where the extremum may sit at a pole.
Lattice make_sphere_lattice_with_poles(std::size_t num_lat, std::size_t num_lon);

/// Uniform lattice on S^1 with `num_nodes` points.
Lattice make_circle_lattice(std::size_t num_nodes);

class QuadratureGrid {
 public:
  int dim() const { return lattice_.dim; }
  std::size_t size() const { return weights_.size(); }
  const Lattice& lattice() const { return lattice_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total_measure() const { return total_measure_; }
  /// Highest polynomial degree integrated exactly.
  int exactness_degree() const { return exactness_; }

  /// Gauss-Legendre weights in cos(colatitude), one per latitude (S^2 only).
  std::span<const double> latitude_weights() const { return lat_weights_; }

  /// Unit vector in R^{n+1} for node i.
  std::vector<double> embedding(std::size_t i) const;

  /// (colatitude, longitude) of node i; on S^1 colatitude is pi/2.
  double colatitude(std::size_t i) const;
  double longitude(std::size_t i) const;

  friend QuadratureGrid make_circle_grid(std::size_t num_nodes);
  friend QuadratureGrid make_sphere_grid(std::size_t num_lat, std::size_t num_lon);

 private:
  Lattice lattice_;
  std::vector<double> weights_;
  std::vector<double> lat_weights_;
  double total_measure_ = 0.0;
  int exactness_ = 0;
};

/// Uniform rule on S^1, exact for trigonometric polynomials of degree < num_nodes.
QuadratureGrid make_circle_grid(std::size_t num_nodes);

/// Gauss-Legendre in cos(colatitude) times uniform longitude on S^2.
QuadratureGrid make_sphere_grid(std::size_t num_lat, std::size_t num_lon);

/// Smallest sphere grid integrating spherical harmonic products up to `degree`.
QuadratureGrid make_sphere_grid_for_degree(int degree);

/// Smallest circle grid integrating trigonometric polynomials up to `degree`.
QuadratureGrid make_circle_grid_for_degree(int degree);

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Jacobi rule on [0, 1] for the weight r^power (Golub-Welsch).
void gauss_jacobi_radial(std::size_t n, int power, std::vector<double>& nodes,
                         std::vector<double>& weights);

double geodesic_distance(const Lattice& lattice, std::size_t i, std::size_t j);
double geodesic_distance(const QuadratureGrid& grid, std::size_t i, std::size_t j);

/// Great-circle distance between (colatitude, longitude) pairs.
double great_circle_distance(double colat_a, double lon_a, double colat_b, double lon_b);

/// Angular distance on S^1.
double circle_distance(double a, double b);

/// (sum_j w_j |v_j|^p)^(1/p); p = infinity gives max |v_j|.
double lp_norm(std::span<const double> values, const QuadratureGrid& grid, double p);

/// L^p norm of |u + i v| for complex-valued functions given as real/imaginary parts.
double lp_norm_complex(std::span<const double> re, std::span<const double> im,
                       const QuadratureGrid& grid, double p);

/// Solid grid on the unit disk (n = 1) or ball (n = 2): boundary grid times a
/// Gauss-Jacobi radial rule with the Jacobian r^n folded into the weights.
struct SolidGrid {
  QuadratureGrid boundary;
  std::vector<double> radial_nodes;
  std::vector<double> radial_weights;
};

/// Radial rule exact for r^d with d <= 2 * num_radial - 1.
SolidGrid make_solid_grid(QuadratureGrid boundary, std::size_t num_radial);

/// Degree-k piece of a boundary function sampled on the solid grid's boundary nodes.
struct DegreeComponent {
  int degree = 0;
  std::vector<double> values;
};

/// L^p norm over the disk/ball of u(r, w) = sum_k r^k c_k(w).
double solid_lp_norm(std::span<const DegreeComponent> components, const SolidGrid& solid, double p);

}  // namespace steklov
