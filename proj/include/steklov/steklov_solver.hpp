#pragma once

#include <memory>
#include <span>
#include <vector>

#include "steklov/operators.hpp"

namespace steklov {

/// Critical exponent 2(n+1)/(n-1); infinite for n = 1.
double critical_exponent(int dim);

/// Sogge exponent: (n-1)/2 (1/2 - 1/p) below p_c, (n-1)/2 - n/p at and above it.
/// Accepts p = infinity. Throws for p < 2 or dim < 1.
double sigma(double p, int dim);

/// Full spectrum of D + V in the harmonic basis.
Spectrum solve_spectrum(const PotentialField& potential, std::shared_ptr<const HarmonicBasis> basis);

/// Solid grid whose boundary rule integrates |u|^p exactly for even p <= p_max at
/// degree K, and whose radial rule integrates r^{K p_max}.
SolidGrid make_extension_grid(const HarmonicBasis& basis, int p_max);

/// Harmonic extension u(r w) = sum_k r^k f_k(w) of a boundary coefficient vector.
class ExtensionProfile {
 public:
  ExtensionProfile(std::shared_ptr<const HarmonicBasis> basis, std::vector<double> coefficients,
                   std::shared_ptr<const SolidGrid> solid);

  const std::vector<double>& coefficients() const { return coefficients_; }
  const std::vector<DegreeComponent>& components() const { return components_; }
  const SolidGrid& solid() const { return *solid_; }

  /// u(r, node) for a node of the solid grid's boundary rule.
  double value(double r, std::size_t node) const;
  /// Values of u on the sphere of radius r.
  std::vector<double> trace(double r = 1.0) const;

  double interior_norm(double p) const;
  double boundary_norm(double p) const;
  /// sup over |x| <= radius; by the maximum principle this is the sup on |x| = radius.
  double ball_sup(double radius = 1.0) const;

 private:
  std::shared_ptr<const HarmonicBasis> basis_;
  std::vector<double> coefficients_;
  std::shared_ptr<const SolidGrid> solid_;
  std::vector<DegreeComponent> components_;
};

ExtensionProfile extend_harmonically(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                                     std::shared_ptr<const SolidGrid> solid);

/// |e|_{L^p(ball)} / |e|_{L^p(sphere)}. Throws if the boundary norm vanishes.
double interior_boundary_ratio(const ExtensionProfile& profile, double p);

/// |T_H beta_l(P) f|_{L^p(ball)} / |f|_{L^p(sphere)}.
/// Rejects l with 2^{l+1} > lambda_K (band not resolved by the basis).
double dyadic_extension_bound(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                              int ell, double p, std::shared_ptr<const SolidGrid> solid);

struct DecayPoint {
  double delta = 0.0;
  double sup = 0.0;    // sup over |x| <= 1 - delta
  double ratio = 0.0;  // sup / boundary sup
};

struct DecayProfile {
  std::vector<DecayPoint> points;
  /// c in sup ~ C exp(-c lambda delta), least squares on log(ratio) vs lambda delta.
  double rate = 0.0;
  double r_squared = 0.0;
};

DecayProfile interior_decay_profile(const HarmonicBasis& basis, std::span<const double> coefficients, double lambda,
                                    std::span<const double> deltas);

struct AprioriPair {
  double interior_l2 = 0.0;   // |u|_{L^2(ball)}
  double trace_h_minus_half = 0.0;  // (sum (1 + lambda_k^2)^{-1/2} |f_k|^2)^{1/2}
  double ratio() const { return interior_l2 / trace_h_minus_half; }
};

/// Both sides of |u|_{L^2} <= C |f|_{H^{-1/2}}; the interior side by solid quadrature.
AprioriPair dirichlet_apriori_check(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                                    std::shared_ptr<const SolidGrid> solid);

/// Number of eigenvalues <= Lambda.
std::size_t counting_function(const Spectrum& spectrum, double Lambda);

/// Orthonormal basis of the cluster [lambda, lambda + 1) as dense coefficient vectors.
std::vector<std::vector<double>> cluster_vectors(const Spectrum& spectrum, double lambda);

}  // namespace steklov
