#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "steklov/harmonic_basis.hpp"
#include "steklov/operators.hpp"
#include "steklov/potential.hpp"

namespace steklov {

/// q_alpha(t, d) = min(t^{-n/alpha}, t d^{-n-alpha}).
double q_alpha(double alpha, int dim, double t, double d);

struct ComparisonKernel {
  double alpha = 1.0;
  int dim = 1;
  double operator()(double t, double d) const { return q_alpha(alpha, dim, t, d); }
};

/// lambda_k^alpha with lambda_k = sqrt(k(k+n-1)), one entry per basis mode.
std::vector<double> fractional_generator(const HarmonicBasis& basis, double alpha);

/// e^{-t lambda_K^alpha}, the weight of the last retained degree.
double heat_tail(int dim, double alpha, int max_degree, double t);
/// Smallest K with heat_tail < tail.
int heat_degree_for(int dim, double alpha, double t, double tail = 1e-14);

/// Kernel of e^{-t Lambda^alpha} at distance d, truncated at degree K.
/// Throws std::domain_error when the truncation tail exceeds 1e-14.
double base_heat_kernel_at(double alpha, int dim, int max_degree, double t, double distance);
/// Same on all node pairs of a lattice; K chosen by heat_degree_for when max_degree < 0.
Eigen::MatrixXd base_heat_kernel(double alpha, double t, const Lattice& lattice, int max_degree = -1);

// ---------------------------------------------------------------------------
// 3P inequality

/// q(t,xz) q(s,zy) / (q(s+t,xy) (q(t,xz) + q(s,zy))).
double three_p_ratio(double alpha, int dim, double t, double s, double dxz, double dzy, double dxy);

struct ThreePResult {
  double max_ratio = 0.0;
  std::size_t samples = 0;
  double t = 0.0, s = 0.0, dxz = 0.0, dzy = 0.0, dxy = 0.0;  // argmax
};

/// Max of the 3P ratio over random s, t in (0, 1] and random node triples of `lattice`.
ThreePResult check_3p(double alpha, const Lattice& lattice, std::size_t samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Kato modulus

/// Weight of the Kato class: d^{alpha-n} for n > alpha, log(2 + 1/d) for n = alpha, 1 for n < alpha.
double kato_weight(double alpha, int dim, double d);

/// int_0^t q_alpha(r, d) dr in closed form (infinite at d = 0 when n >= alpha).
double kato_time_integral(double alpha, int dim, double t, double d);

struct KatoModulus {
  double alpha = 1.0;
  std::vector<double> times;
  std::vector<double> values;       // c(t) = sup_y int int q |V|
  std::vector<std::size_t> argmax;  // lattice node attaining the sup
};

/// c(t) = sup_y int_0^t int q(r, y, z) |V(z)| dz dr, sup over the nodes of `points`.
KatoModulus kato_modulus(const PotentialField& potential, double alpha, const std::vector<double>& times,
                         const Lattice& points);

/// sup_y int_{d(y,z) < radius} w(y,z) |V(z)| dz.
double kato_class_integral(const PotentialField& potential, double alpha, double radius, const Lattice& points);

// ---------------------------------------------------------------------------
// Perturbed kernel

struct PicardOptions {
  int max_iterations = 80;
  double tolerance = 1e-10;     // stop when |Theta_m| / |p0| falls below
  int initial_panels = 4;       // 8 Gauss nodes per panel
  int max_panels = 32;
  double refine_tolerance = 1e-8;
  double grading = 6.0;         // first panel ends at t 2^-grading
};

struct PicardResult {
  double t = 0.0;
  Eigen::MatrixXd coefficients;  // P(t) in basis coordinates
  Eigen::MatrixXd kernel;        // P(t) on the basis grid
  Eigen::MatrixXd free_kernel;   // p0(t) on the basis grid
  std::vector<double> theta_norms;       // max |Theta_m(t)| over node pairs
  std::vector<double> ratios;            // theta_norms[m] / theta_norms[m-1]
  std::vector<double> pointwise_ratios;  // max |Theta_m| / p0 over pairs with p0 bounded away from 0
  int iterations = 0;
  int time_nodes = 0;
  double refinement_change = 0.0;
  bool converged = false;
  /// Every measured ratio is below 1/3.
  bool contracted = false;
};

/// Kernel of e^{-t(G + M)} for a diagonal generator G (one entry per mode) and a
/// symmetric multiplication matrix M, by the Duhamel series in basis coordinates.
PicardResult picard_heat_kernel(const std::vector<double>& generator, const BoundaryOperator& multiplication,
                                double t, const PicardOptions& options = {});

/// Generator Lambda^alpha, M = Galerkin matrix of V.
PicardResult picard_heat_kernel(const PotentialField& potential, double alpha,
                                std::shared_ptr<const HarmonicBasis> basis, double t,
                                const PicardOptions& options = {});

/// Synthesis matrix Y (nodes x modes) on a lattice.
Eigen::MatrixXd synthesis_matrix(const HarmonicBasis& basis, const Lattice& lattice);

// ---------------------------------------------------------------------------
// Kernels on a grid

struct HeatKernelGrid {
  double alpha = 1.0;
  int dim = 1;
  QuadratureGrid grid;
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> kernels;
  std::vector<std::string> provenance;  // "base", "picard", "semigroup"
};

/// P(2t)(x, y) = sum_z P(t)(x, z) w_z P(t)(z, y).
Eigen::MatrixXd compose_kernels(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const QuadratureGrid& grid);

/// Appends kernels at 2t, 4t, ... by repeated composition of the last entry.
void extend_semigroup(HeatKernelGrid& kernels, int doublings);

/// max |P(t) P(s) - P(t+s)| / max |P(t+s)|.
double semigroup_defect(const Eigen::MatrixXd& pt, const Eigen::MatrixXd& ps, const Eigen::MatrixXd& pts,
                        const QuadratureGrid& grid);

struct EnvelopeRow {
  double t = 0.0;
  double sup_ratio = 0.0;
  double inf_ratio = 0.0;
  std::size_t pairs = 0;
};

/// sup and inf of p / q_alpha over node pairs for each stored time. On S^2 pairs
/// closer than `exclusion` are skipped; exclusion < 0 means two latitude spacings.
std::vector<EnvelopeRow> two_sided_bound_report(const HeatKernelGrid& kernels, double exclusion = -1.0);

}  // namespace steklov
