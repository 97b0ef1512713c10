#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "steklov/harmonic_basis.hpp"

namespace steklov {

enum class PotentialClass { Linfty, Lipschitz };

/// Band-limited real potential V on S^n, stored as a harmonic series so it can
/// be sampled on any lattice.
class PotentialField {
 public:
  PotentialField(std::shared_ptr<const HarmonicBasis> series_basis, std::vector<double> coefficients,
                 std::string name);

  const std::string& name() const { return name_; }
  int dim() const { return series_basis_->dim(); }
  /// Highest degree present in the series.
  int degree() const { return degree_; }
  const HarmonicBasis& series_basis() const { return *series_basis_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  /// Values on an arbitrary lattice of the same dimension.
  std::vector<double> sample(const Lattice& lattice) const;
  std::vector<double> sample(const QuadratureGrid& grid) const { return sample(grid.lattice()); }
  /// Value at one point (colatitude ignored on S^1).
  double value_at(double colatitude, double longitude) const;

  double sup_norm() const { return sup_norm_; }
  /// Max of |V(x) - V(y)| / d(x, y) over neighbouring nodes of a fine lattice.
  double lipschitz_estimate() const { return lipschitz_; }
  /// sup |grad V| evaluated spectrally on a fine lattice.
  double gradient_sup() const { return gradient_sup_; }
  PotentialClass tag() const { return PotentialClass::Lipschitz; }

  bool is_zero() const { return is_zero_; }
  bool is_constant() const { return degree_ == 0; }
  /// Independent of longitude on S^2 (only m = 0 terms).
  bool is_zonal() const { return zonal_; }
  /// Even in theta on S^1 (cosine terms only).
  bool is_even() const { return even_; }
  double mean() const;

 private:
  std::shared_ptr<const HarmonicBasis> series_basis_;
  std::vector<double> coefficients_;
  std::string name_;
  int degree_ = 0;
  double sup_norm_ = 0.0;
  double lipschitz_ = 0.0;
  double gradient_sup_ = 0.0;
  bool is_zero_ = true;
  bool zonal_ = true;
  bool even_ = true;
};

struct PotentialSpec {
  enum class Family { Zero, Constant, CosLowFreq, RandomLipschitz };
  Family family = Family::Zero;
  double constant = 0.0;        // Constant
  std::uint64_t seed = 1;       // RandomLipschitz
  double lipschitz_cap = 1.0;   // RandomLipschitz
  int degree = 4;               // RandomLipschitz: series degree
  bool zonal = false;           // RandomLipschitz on S^2

  /// Parses "zero", "constant:c", "cos-lowfreq", "random-lipschitz:seed=..,cap=..,degree=..,zonal=1".
  static PotentialSpec parse(const std::string& text);
  std::string to_string() const;
};

PotentialField make_potential(int dim, const PotentialSpec& spec);

}  // namespace steklov
