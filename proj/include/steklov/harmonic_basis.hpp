#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "steklov/geometry.hpp"

namespace steklov {

/// One real basis function: degree k, order m, and cos/sin flavour.
/// On S^1 the order is k itself; on S^2 0 <= m <= k and m = 0 has no sine partner.
struct Mode {
  int degree = 0;
  int order = 0;
  bool sine = false;
};

enum class Derivative {
  Value,
  DTheta,       // d/dtheta on S^1, d/d(colatitude) on S^2
  D2Theta,      // S^1 only
  DPhiOverSin,  // (1/sin colatitude) d/d(longitude) on S^2
};

/// Precomputed trigonometric/Legendre tables mapping coefficients of a basis
/// onto an arbitrary lattice (and the transpose).
class Evaluator {
 public:
  Evaluator(int dim, int max_degree, Lattice lattice, bool with_derivatives);

  const Lattice& lattice() const { return lattice_; }
  std::size_t size() const { return lattice_.size(); }

  std::vector<double> synthesize(std::span<const double> coeffs,
                                 Derivative kind = Derivative::Value) const;
  /// Transpose of synthesize(Value): out_mode = sum_x values[x] * Y_mode(x).
  std::vector<double> adjoint(std::span<const double> values) const;

 private:
  int dim_;
  int max_degree_;
  std::size_t num_modes_;
  Lattice lattice_;
  bool with_derivatives_;
  // S^1: cos/sin tables, [k * n + j]. S^2: longitude tables [m * nlon + j].
  std::vector<double> cos_table_, sin_table_;
  // S^2: normalized associated Legendre values per order m, [offset_[m] + (k - m) * nlat + i].
  std::vector<std::size_t> offset_;
  std::vector<double> legendre_, dlegendre_, legendre_over_sin_;
};

class HarmonicBasis {
 public:
  /// Real orthonormal basis of degree <= max_degree on S^dim.
  /// Requires grid.exactness_degree() >= 2 * max_degree.
  HarmonicBasis(int dim, int max_degree, QuadratureGrid grid);

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return modes_.size(); }
  const std::vector<Mode>& modes() const { return modes_; }
  const Mode& mode(std::size_t i) const { return modes_[i]; }
  const QuadratureGrid& grid() const { return grid_; }
  const Evaluator& evaluator() const { return *evaluator_; }

  std::size_t index_of(int degree, int order, bool sine) const;
  static std::size_t mode_index(int dim, int degree, int order, bool sine);
  static std::size_t mode_count(int dim, int max_degree);
  /// Number of basis functions of exact degree k.
  std::size_t multiplicity(int degree) const;
  /// Index of the first mode of degree k; modes of one degree are contiguous.
  std::size_t degree_offset(int degree) const;

  /// mu_k = k(k + n - 1).
  double laplace_eigenvalue(std::size_t mode_index) const;
  /// sqrt(mu_k).
  double sqrt_eigenvalue(std::size_t mode_index) const;
  static double laplace_eigenvalue_of_degree(int dim, int degree);

  std::vector<double> synthesize(std::span<const double> coeffs) const;
  std::vector<double> analyze(std::span<const double> values) const;

  /// Share of the L^2 energy of f lying above max_degree, measured in a basis of
  /// doubled degree. Samples on the own grid cannot reveal aliasing, so f is a callable
  /// of (colatitude, longitude); on S^1 the colatitude argument is ignored.
  double energy_leak(const std::function<double(double, double)>& f) const;

  Evaluator make_evaluator(Lattice lattice, bool with_derivatives = false) const {
    return Evaluator(dim_, max_degree_, std::move(lattice), with_derivatives);
  }

 private:
  int dim_;
  int max_degree_;
  QuadratureGrid grid_;
  std::vector<Mode> modes_;
  std::shared_ptr<const Evaluator> evaluator_;
  mutable std::shared_ptr<std::mutex> cache_mutex_ = std::make_shared<std::mutex>();
  mutable std::shared_ptr<std::map<int, std::shared_ptr<const Evaluator>>> sup_cache_ =
      std::make_shared<std::map<int, std::shared_ptr<const Evaluator>>>();

  friend const Evaluator& sup_evaluator(const HarmonicBasis& basis, int oversample);
};

/// Cached evaluator on sup_lattice(basis, oversample).
const Evaluator& sup_evaluator(const HarmonicBasis& basis, int oversample);

/// Normalized associated Legendre values for one colatitude: table[m][k - m] with
/// integral over [-1, 1] of Pbar_k^m(x)^2 dx = 1.
void normalized_legendre(int max_degree, double colatitude, std::vector<std::vector<double>>& table);

/// Coefficients of the L^2-normalized zonal harmonic of degree k about `pole`
/// ((colatitude, longitude) on S^2; angle on S^1, colatitude ignored).
std::vector<double> zonal_coefficients(const HarmonicBasis& basis, int degree, double pole_colatitude,
                                       double pole_longitude);
std::vector<double> zonal_harmonic(const HarmonicBasis& basis, int degree, double pole_colatitude = 0.0,
                                   double pole_longitude = 0.0);

/// Coefficients of the real highest-weight harmonic sin^k(theta) cos(k phi), normalized. S^2 only.
std::vector<double> highest_weight_coefficients(const HarmonicBasis& basis, int degree);
std::vector<double> highest_weight_harmonic(const HarmonicBasis& basis, int degree);

/// Sup norm of a coefficient vector, evaluated on lattices of increasing density
/// until consecutive maxima differ by less than 1%. Lattices include the poles on S^2.
double sup_norm(const HarmonicBasis& basis, std::span<const double> coeffs);

/// Lattice used for sup searches at a given oversampling factor.
Lattice sup_lattice(const HarmonicBasis& basis, int oversample);

double euclidean_norm(std::span<const double> v);

}  // namespace steklov
