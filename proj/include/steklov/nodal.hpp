#pragma once

#include <memory>
#include <span>
#include <vector>

#include "steklov/fit.hpp"
#include "steklov/harmonic_basis.hpp"

namespace steklov {

struct NodalZero {
  double theta = 0.0;
  double gradient = 0.0;  // |e'(theta)|
};

/// Piece of a nodal line on S^2 with |grad e| interpolated at both ends.
struct NodalSegment {
  double colat_a = 0.0, lon_a = 0.0;
  double colat_b = 0.0, lon_b = 0.0;
  double length = 0.0;
  double grad_a = 0.0, grad_b = 0.0;
};

struct NodalSet {
  int dim = 1;
  std::vector<NodalZero> zeros;        // S^1, sorted by angle
  std::vector<NodalSegment> segments;  // S^2
  double measure = 0.0;                // zero count on S^1, total length on S^2
  double min_gradient = 0.0;           // over the set
  double gradient_sup = 0.0;           // sup |grad e| over the evaluation lattice
  bool regular = true;                 // min_gradient >= 1e-6 * gradient_sup
  int refinement = 0;
};

/// Evaluation tables shared by repeated extractions at one refinement.
class NodalWorkspace {
 public:
  NodalWorkspace(std::shared_ptr<const HarmonicBasis> basis, int refinement = 8);

  const HarmonicBasis& basis() const { return *basis_; }
  int refinement() const { return refinement_; }
  /// Lattice used for contouring (S^2 includes both poles).
  const Lattice& lattice() const { return contour_.lattice(); }
  const Evaluator& contour_evaluator() const { return contour_; }
  /// Gauss rule for sign-mask domain integrals on S^2 (oversampled like the lattice).
  const QuadratureGrid& mask_grid() const { return mask_grid_; }
  const Evaluator& mask_evaluator() const { return mask_; }

 private:
  std::shared_ptr<const HarmonicBasis> basis_;
  int refinement_;
  Evaluator contour_;
  QuadratureGrid mask_grid_;
  Evaluator mask_;
};

/// Zeros by bracketing and root refinement to 1e-12 on S^1; marching squares with
/// great-circle segment lengths on S^2. Rejects the zero function and refinement < 4.
NodalSet extract_nodal_set(const NodalWorkspace& ws, std::span<const double> coefficients);
NodalSet extract_nodal_set(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                           int refinement = 8);

/// |measure(2 r) - measure(r)| / measure(2 r); zero when both vanish.
double nodal_refinement_change(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                               int refinement = 8);

/// Slope of log |N_lambda| against log lambda.
ExponentFit nodal_measure_exponent(const std::vector<std::pair<double, double>>& lambda_measure, double lo = 0.0,
                                   double hi = 1e300);

enum class GreenWeight { One, GradWeight };  // f = 1 or f = sqrt(1 + |grad e|^2)

struct GreenPair {
  double lhs = 0.0;  // 2 int_N f |grad e|
  double rhs = 0.0;  // int_{D-} div(f grad e) - int_{D+} div(f grad e)
  double relative_residual() const;
};

/// Both sides of the nodal Gauss-Green identity. Throws std::domain_error on a
/// non-regular nodal set.
GreenPair gauss_green_residual(const NodalWorkspace& ws, std::span<const double> coefficients, const NodalSet& nodal,
                               GreenWeight weight);

struct NodalGradientBound {
  double nodal_gradient_integral = 0.0;  // int_N |grad e|
  double bound = 0.0;                    // lambda^2 / 4 |e|_1
};

struct NodalGradientSqBound {
  double nodal_gradient_sq_integral = 0.0;  // int_N |grad e|^2
  double bound = 0.0;                       // lambda^3 |e|_2
  double ratio = 0.0;
};

NodalGradientBound nodal_gradient_bound(const NodalWorkspace& ws, std::span<const double> coefficients, double lambda,
                       const NodalSet& nodal);
NodalGradientSqBound nodal_gradient_sq_bound(std::span<const double> coefficients, double lambda, const NodalSet& nodal);

/// L^1 norm of e: exact interval quadrature between zeros on S^1, the mask grid on S^2.
double nodal_l1_norm(const NodalWorkspace& ws, std::span<const double> coefficients, const NodalSet& nodal);

}  // namespace steklov
