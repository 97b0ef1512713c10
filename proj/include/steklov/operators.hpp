#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "steklov/harmonic_basis.hpp"
#include "steklov/potential.hpp"

namespace steklov {

/// Symmetric-friendly block-diagonal matrix: a partition of the index set into
/// blocks, each carrying a dense sub-matrix. Diagonal matrices are 1x1 blocks.
class BlockOperator {
 public:
  struct Block {
    std::vector<std::size_t> indices;
    Eigen::MatrixXd matrix;
  };

  BlockOperator() = default;
  static BlockOperator diagonal(const Eigen::VectorXd& d);
  /// Splits a dense matrix into the connected components of its sparsity graph;
  /// entries with |a_ij| <= drop_tolerance * max|a| are treated as zero.
  static BlockOperator from_dense(const Eigen::MatrixXd& a, double drop_tolerance = 1e-13);
  static BlockOperator from_blocks(std::size_t dim, std::vector<Block> blocks);

  std::size_t dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  bool is_diagonal() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double entry(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd to_dense() const;
  /// max |A - A^T|.
  double symmetry_defect() const;
  double max_abs() const;

  BlockOperator operator+(const BlockOperator& other) const;
  BlockOperator operator-(const BlockOperator& other) const;
  BlockOperator scaled(double s) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Block> blocks_;
  std::vector<std::size_t> block_of_;   // block id per global index
  std::vector<std::size_t> local_of_;   // position inside its block
  void index();
  static BlockOperator combine(const BlockOperator& a, const BlockOperator& b, double sb);
};

enum class OperatorTag { DtN, SqrtLaplacian, OrderZero, MultiplyV, Composite, Multiplier, Projector, Resolvent };

std::string to_string(OperatorTag tag);

struct BoundaryOperator {
  std::shared_ptr<const HarmonicBasis> basis;
  BlockOperator matrix;
  bool symmetric = true;
  OperatorTag tag = OperatorTag::Composite;
  /// Set when quadrature assembly could not reproduce the exact symmetry.
  bool resolution_flag = false;
};

/// Dirichlet-to-Neumann map of the unit disk/ball: entry k on each degree-k mode.
BoundaryOperator assemble_dtn(std::shared_ptr<const HarmonicBasis> basis);
BoundaryOperator assemble_sqrt_laplacian(std::shared_ptr<const HarmonicBasis> basis);
/// P0 = DtN - sqrt(-Laplacian).
BoundaryOperator assemble_order_zero(std::shared_ptr<const HarmonicBasis> basis);
/// Galerkin matrix <Y_i, V Y_j> by quadrature on the basis grid.
BoundaryOperator assemble_multiplication(const PotentialField& potential,
                                         std::shared_ptr<const HarmonicBasis> basis);
BoundaryOperator compose_sum(const BoundaryOperator& a, const BoundaryOperator& b);

// ---------------------------------------------------------------------------
// Spectral decomposition

/// Eigenvector stored on the support of its block.
struct SparseVector {
  std::vector<std::size_t> support;
  std::vector<double> values;

  double dot(std::span<const double> x) const;
  void axpy(double a, std::span<double> y) const;
  std::vector<double> dense(std::size_t n) const;
};

struct Eigenpair {
  double lambda = 0.0;
  std::size_t index = 0;
  double residual = 0.0;
  SparseVector vector;
  /// Energy share carried by the top 10% of degrees exceeds 1e-6.
  bool truncation_flag = false;

  std::vector<double> coefficients(std::size_t n) const { return vector.dense(n); }
};

struct Spectrum {
  std::shared_ptr<const HarmonicBasis> basis;
  std::vector<Eigenpair> pairs;  // ascending eigenvalue

  /// Indices of eigenpairs with eigenvalue in [lo, hi).
  std::vector<std::size_t> window(double lo, double hi) const;
};

/// Full symmetric eigendecomposition, block by block.
Spectrum eigendecompose(const BoundaryOperator& op);

// ---------------------------------------------------------------------------
// Spectral multipliers

using ScalarMultiplier = std::function<double(double)>;

/// Smooth dyadic partition: chi = 1 on [0,1], 0 on [2,inf); beta(s) = chi(s) - chi(2s)
/// is supported in (1/2, 2) and sum_l beta(2^-l s) = 1 for s > 0.
struct LittlewoodPaley {
  static double chi(double s);
  static double beta(double s);
  /// beta_0 = chi, beta_l(s) = beta(2^-l s) for l > 0.
  static double beta_ell(int ell, double s);
};

/// Mode-wise multiplication of coefficients by m(sqrt(mu_k) / R).
std::vector<double> apply_multiplier(const ScalarMultiplier& m, double R, const HarmonicBasis& basis,
                                     std::span<const double> coeffs);

/// Kernel of m(P/R) at geodesic distance d, by the addition theorem:
/// S^1: (1/2pi)(m(0) + 2 sum_k m(k/R) cos kd); S^2: sum_k m(lambda_k/R) (2k+1)/(4pi) P_k(cos d).
double multiplier_kernel_at(const ScalarMultiplier& m, double R, int dim, int max_degree, double distance);

/// Kernel matrix over node pairs of the basis grid.
Eigen::MatrixXd multiplier_kernel(const ScalarMultiplier& m, double R, const HarmonicBasis& basis);

struct EnvelopeFit {
  double constant = 0.0;
  double argmax_distance = 0.0;
};

/// C = max over distances of |K(d)| (1 + R d)^N R^-n.
EnvelopeFit fit_kernel_envelope(const ScalarMultiplier& m, double R, int dim, int max_degree, int decay_power,
                                std::span<const double> distances);

// ---------------------------------------------------------------------------
// Cluster projectors and operator norms

struct ClusterProjector {
  BoundaryOperator op;
  std::vector<std::size_t> members;  // eigenpair indices in the spectrum
  bool empty = true;
};

/// Orthogonal projector onto eigenspaces with eigenvalue in [lambda, lambda + width).
ClusterProjector cluster_projector(const Spectrum& spectrum, double lambda, double width = 1.0);

/// T = sum_j d_j v_j v_j^T with complex multipliers d_j and orthonormal real v_j.
struct SpectralMap {
  std::size_t dim = 0;
  std::vector<SparseVector> vectors;
  std::vector<std::complex<double>> multipliers;

  static SpectralMap from_spectrum(const Spectrum& spectrum, std::span<const std::size_t> members,
                                   const std::function<std::complex<double>(double)>& multiplier);
  static SpectralMap from_vectors(std::size_t dim, std::vector<std::vector<double>> vectors);

  /// Coefficients of Re(Tf) and Im(Tf).
  void forward(std::span<const double> f, std::vector<double>& re, std::vector<double>& im) const;
  /// Real adjoint: f -> Re <T f, h_re + i h_im>.
  std::vector<double> adjoint(std::span<const double> h_re, std::span<const double> h_im) const;
  bool is_real() const;
};

struct NormOptions {
  int starts = 8;
  int max_iterations = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 12345;
};

struct NormEstimate {
  double value = 0.0;          // best lower bound found
  int iterations = 0;          // iterations used by the best start
  bool converged = false;      // best start met the tolerance
  std::vector<double> start_values;
  bool exact = false;          // value comes from a closed-form sup rather than iteration
};

/// Lower bound for sup_{|f|_2 = 1} |T f|_p by duality-map power iteration.
/// The L^p norm uses quadrature on `eval_grid`; p = infinity uses the exact
/// kernel-diagonal formula sup_x (sum_j |d_j|^2 v_j(x)^2)^{1/2} on the sup lattice.
NormEstimate operator_norm_2_to_p(const SpectralMap& map, const HarmonicBasis& basis, double p,
                                  const QuadratureGrid& eval_grid, const NormOptions& options = {});

/// Exact L^2 -> L^inf norm: sup over `lattice` of (sum_j |d_j|^2 v_j(x)^2)^{1/2}.
double norm_2_to_inf_exact(const SpectralMap& map, const HarmonicBasis& basis, const Lattice& lattice);

/// L^2 -> L^p norm of (A - (lambda + i))^{-1} for the operator whose spectrum is given.
NormEstimate resolvent_norm(const Spectrum& spectrum, double lambda, double p, const QuadratureGrid& eval_grid,
                            const NormOptions& options = {});

/// Quadrature grid able to integrate |f|^p exactly-ish for degree-K functions.
QuadratureGrid norm_grid(const HarmonicBasis& basis, int factor);

}  // namespace steklov
