#include "steklov/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace steklov {

// ---------------------------------------------------------------------------
// BlockOperator

void BlockOperator::index() {
  block_of_.assign(dim_, static_cast<std::size_t>(-1));
  local_of_.assign(dim_, 0);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (std::size_t l = 0; l < blocks_[b].indices.size(); ++l) {
      const std::size_t g = blocks_[b].indices[l];
      if (g >= dim_ || block_of_[g] != static_cast<std::size_t>(-1))
        throw std::invalid_argument("BlockOperator: blocks must partition the index set");
      block_of_[g] = b;
      local_of_[g] = l;
    }
  for (std::size_t g = 0; g < dim_; ++g)
    if (block_of_[g] == static_cast<std::size_t>(-1))
      throw std::invalid_argument("BlockOperator: index not covered by any block");
}

BlockOperator BlockOperator::diagonal(const Eigen::VectorXd& d) {
  BlockOperator op;
  op.dim_ = static_cast<std::size_t>(d.size());
  op.blocks_.resize(op.dim_);
  for (std::size_t i = 0; i < op.dim_; ++i) {
    op.blocks_[i].indices = {i};
    op.blocks_[i].matrix = Eigen::MatrixXd::Constant(1, 1, d(static_cast<Eigen::Index>(i)));
  }
  op.index();
  return op;
}

BlockOperator BlockOperator::from_blocks(std::size_t dim, std::vector<Block> blocks) {
  BlockOperator op;
  op.dim_ = dim;
  op.blocks_ = std::move(blocks);
  for (const auto& b : op.blocks_)
    if (b.matrix.rows() != static_cast<Eigen::Index>(b.indices.size()) || b.matrix.cols() != b.matrix.rows())
      throw std::invalid_argument("BlockOperator: block shape mismatch");
  op.index();
  return op;
}

namespace {
struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};
}  // namespace

BlockOperator BlockOperator::from_dense(const Eigen::MatrixXd& a, double drop_tolerance) {
  if (a.rows() != a.cols()) throw std::invalid_argument("BlockOperator::from_dense: matrix not square");
  const auto n = static_cast<std::size_t>(a.rows());
  const double cut = drop_tolerance * a.cwiseAbs().maxCoeff();
  UnionFind uf(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (i != j && std::abs(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > cut) uf.unite(i, j);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
  std::vector<Block> blocks;
  blocks.reserve(groups.size());
  for (auto& [root, idx] : groups) {
    Block b;
    b.indices = idx;
    const auto m = static_cast<Eigen::Index>(idx.size());
    b.matrix.resize(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c)
        b.matrix(r, c) = a(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                           static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
    blocks.push_back(std::move(b));
  }
  return from_blocks(n, std::move(blocks));
}

bool BlockOperator::is_diagonal() const {
  for (const auto& b : blocks_)
    if (b.indices.size() > 1 && !b.matrix.isDiagonal(0.0)) return false;
  return true;
}

Eigen::VectorXd BlockOperator::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw std::invalid_argument("BlockOperator::apply: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (const auto& b : blocks_) {
    const auto m = static_cast<Eigen::Index>(b.indices.size());
    Eigen::VectorXd xl(m);
    for (Eigen::Index l = 0; l < m; ++l) xl(l) = x(static_cast<Eigen::Index>(b.indices[static_cast<std::size_t>(l)]));
    const Eigen::VectorXd yl = b.matrix * xl;
    for (Eigen::Index l = 0; l < m; ++l) y(static_cast<Eigen::Index>(b.indices[static_cast<std::size_t>(l)])) = yl(l);
  }
  return y;
}

double BlockOperator::entry(std::size_t i, std::size_t j) const {
  if (block_of_.at(i) != block_of_.at(j)) return 0.0;
  return blocks_[block_of_[i]].matrix(static_cast<Eigen::Index>(local_of_[i]), static_cast<Eigen::Index>(local_of_[j]));
}

Eigen::MatrixXd BlockOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& b : blocks_)
    for (std::size_t r = 0; r < b.indices.size(); ++r)
      for (std::size_t c = 0; c < b.indices.size(); ++c)
        a(static_cast<Eigen::Index>(b.indices[r]), static_cast<Eigen::Index>(b.indices[c])) =
            b.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return a;
}

double BlockOperator::symmetry_defect() const {
  double d = 0.0;
  for (const auto& b : blocks_) d = std::max(d, (b.matrix - b.matrix.transpose()).cwiseAbs().maxCoeff());
  return d;
}

double BlockOperator::max_abs() const {
  double d = 0.0;
  for (const auto& b : blocks_) d = std::max(d, b.matrix.cwiseAbs().maxCoeff());
  return d;
}

BlockOperator BlockOperator::combine(const BlockOperator& a, const BlockOperator& b, double sb) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("BlockOperator: dimension mismatch");
  // Coarsest common refinement: union of the two partitions.
  UnionFind uf(a.dim_);
  for (const auto* op : {&a, &b})
    for (const auto& blk : op->blocks_)
      for (std::size_t l = 1; l < blk.indices.size(); ++l) uf.unite(blk.indices[0], blk.indices[l]);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < a.dim_; ++i) groups[uf.find(i)].push_back(i);
  std::vector<Block> blocks;
  blocks.reserve(groups.size());
  for (auto& [root, idx] : groups) {
    Block blk;
    blk.indices = idx;
    const auto m = static_cast<Eigen::Index>(idx.size());
    blk.matrix = Eigen::MatrixXd::Zero(m, m);
    std::map<std::size_t, Eigen::Index> local;
    for (Eigen::Index l = 0; l < m; ++l) local[idx[static_cast<std::size_t>(l)]] = l;
    auto add = [&](const BlockOperator& op, double s) {
      std::vector<std::size_t> seen;
      for (std::size_t g : idx) {
        const std::size_t bid = op.block_of_[g];
        if (std::find(seen.begin(), seen.end(), bid) != seen.end()) continue;
        seen.push_back(bid);
        const auto& ob = op.blocks_[bid];
        for (std::size_t r = 0; r < ob.indices.size(); ++r)
          for (std::size_t c = 0; c < ob.indices.size(); ++c)
            blk.matrix(local[ob.indices[r]], local[ob.indices[c]]) +=
                s * ob.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    };
    add(a, 1.0);
    add(b, sb);
    blocks.push_back(std::move(blk));
  }
  return from_blocks(a.dim_, std::move(blocks));
}

BlockOperator BlockOperator::operator+(const BlockOperator& other) const { return combine(*this, other, 1.0); }
BlockOperator BlockOperator::operator-(const BlockOperator& other) const { return combine(*this, other, -1.0); }

BlockOperator BlockOperator::scaled(double s) const {
  BlockOperator r = *this;
  for (auto& b : r.blocks_) b.matrix *= s;
  return r;
}

std::string to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::DtN: return "DtN";
    case OperatorTag::SqrtLaplacian: return "SqrtLaplacian";
    case OperatorTag::OrderZero: return "OrderZero";
    case OperatorTag::MultiplyV: return "MultiplyV";
    case OperatorTag::Composite: return "Composite";
    case OperatorTag::Multiplier: return "Multiplier";
    case OperatorTag::Projector: return "Projector";
    case OperatorTag::Resolvent: return "Resolvent";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Assembly

namespace {
BoundaryOperator diagonal_operator(std::shared_ptr<const HarmonicBasis> basis, OperatorTag tag,
                                   const std::function<double(const Mode&, std::size_t)>& entry) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis->size()));
  for (std::size_t i = 0; i < basis->size(); ++i) d(static_cast<Eigen::Index>(i)) = entry(basis->mode(i), i);
  return {std::move(basis), BlockOperator::diagonal(d), true, tag, false};
}
}  // namespace

BoundaryOperator assemble_dtn(std::shared_ptr<const HarmonicBasis> basis) {
  // d/dr r^k at r = 1.
  return diagonal_operator(std::move(basis), OperatorTag::DtN,
                           [](const Mode& m, std::size_t) { return static_cast<double>(m.degree); });
}

BoundaryOperator assemble_sqrt_laplacian(std::shared_ptr<const HarmonicBasis> basis) {
  const HarmonicBasis* b = basis.get();
  return diagonal_operator(std::move(basis), OperatorTag::SqrtLaplacian,
                           [b](const Mode&, std::size_t i) { return b->sqrt_eigenvalue(i); });
}

BoundaryOperator assemble_order_zero(std::shared_ptr<const HarmonicBasis> basis) {
  const HarmonicBasis* b = basis.get();
  return diagonal_operator(std::move(basis), OperatorTag::OrderZero, [b](const Mode& m, std::size_t i) {
    return static_cast<double>(m.degree) - b->sqrt_eigenvalue(i);
  });
}

BoundaryOperator assemble_multiplication(const PotentialField& potential,
                                         std::shared_ptr<const HarmonicBasis> basis) {
  if (potential.dim() != basis->dim()) throw std::invalid_argument("assemble_multiplication: dimension mismatch");
  const int K = basis->max_degree();
  const std::size_t n = basis->size();
  if (potential.is_zero() || potential.is_constant()) {
    const double c = potential.is_zero() ? 0.0 : potential.mean();
    return {std::move(basis), BlockOperator::diagonal(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), c)),
            true, OperatorTag::MultiplyV, false};
  }
  const int need = 2 * K + potential.degree();
  if (basis->dim() == 2 && potential.is_zonal()) {
    // Rotation about the polar axis is a symmetry: one block per (order, flavour),
    // entries are latitude integrals of V Pbar_k^m Pbar_k'^m.
    std::vector<double> x, w;
    gauss_legendre(static_cast<std::size_t>(need / 2 + 2), x, w);
    Lattice lat;
    lat.dim = 2;
    lat.longitudes = {0.0};
    for (double xi : x) lat.colatitudes.push_back(std::acos(xi));
    const auto v = potential.sample(lat);
    std::vector<std::vector<std::vector<double>>> leg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) normalized_legendre(K, lat.colatitudes[i], leg[i]);
    std::vector<BlockOperator::Block> blocks;
    for (int m = 0; m <= K; ++m) {
      const int len = K - m + 1;
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(len, len);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& col = leg[i][static_cast<std::size_t>(m)];
        const double s = w[i] * v[i];
        for (int r = 0; r < len; ++r)
          for (int c = 0; c <= r; ++c) a(r, c) += s * col[static_cast<std::size_t>(r)] * col[static_cast<std::size_t>(c)];
      }
      a.triangularView<Eigen::StrictlyUpper>() = a.transpose().triangularView<Eigen::StrictlyUpper>();
      for (int flavour = 0; flavour < (m == 0 ? 1 : 2); ++flavour) {
        BlockOperator::Block b;
        for (int k = m; k <= K; ++k) b.indices.push_back(basis->index_of(k, m, flavour == 1));
        b.matrix = a;
        blocks.push_back(std::move(b));
      }
    }
    return {std::move(basis), BlockOperator::from_blocks(n, std::move(blocks)), true, OperatorTag::MultiplyV, false};
  }
  // Generic path: column j = analysis of V * Y_j on a grid exact for degree 2K + deg V.
  const QuadratureGrid grid =
      basis->dim() == 1 ? make_circle_grid_for_degree(need) : make_sphere_grid_for_degree(need);
  const Evaluator ev = basis->make_evaluator(grid.lattice());
  const auto v = potential.sample(grid);
  const auto wts = grid.weights();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> e(n, 0.0), col(grid.size());
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const auto y = ev.synthesize(e);
    for (std::size_t q = 0; q < y.size(); ++q) col[q] = y[q] * v[q] * wts[q];
    const auto c = ev.adjoint(col);
    for (std::size_t i = 0; i < n; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c[i];
  }
  const double defect = (a - a.transpose()).cwiseAbs().maxCoeff();
  const bool flag = defect > 1e-10;
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  return {std::move(basis), BlockOperator::from_dense(sym), !flag, OperatorTag::MultiplyV, flag};
}

BoundaryOperator compose_sum(const BoundaryOperator& a, const BoundaryOperator& b) {
  if (a.basis != b.basis && a.basis->size() != b.basis->size())
    throw std::invalid_argument("compose_sum: operators on different bases");
  return {a.basis, a.matrix + b.matrix, a.symmetric && b.symmetric, OperatorTag::Composite,
          a.resolution_flag || b.resolution_flag};
}

// ---------------------------------------------------------------------------
// Spectra

double SparseVector::dot(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t l = 0; l < support.size(); ++l) s += values[l] * x[support[l]];
  return s;
}

void SparseVector::axpy(double a, std::span<double> y) const {
  for (std::size_t l = 0; l < support.size(); ++l) y[support[l]] += a * values[l];
}

std::vector<double> SparseVector::dense(std::size_t n) const {
  std::vector<double> v(n, 0.0);
  for (std::size_t l = 0; l < support.size(); ++l) v[support[l]] = values[l];
  return v;
}

std::vector<std::size_t> Spectrum::window(double lo, double hi) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < pairs.size(); ++j)
    if (pairs[j].lambda >= lo && pairs[j].lambda < hi) out.push_back(j);
  return out;
}

Spectrum eigendecompose(const BoundaryOperator& op) {
  if (!op.symmetric) throw std::invalid_argument("eigendecompose: operator not symmetric");
  Spectrum s;
  s.basis = op.basis;
  const std::size_t n = op.matrix.dim();
  const std::size_t top_start = n - std::max<std::size_t>(1, n / 10);
  for (const auto& blk : op.matrix.blocks()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(blk.matrix);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecompose: eigensolver failed");
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    for (Eigen::Index c = 0; c < vals.size(); ++c) {
      Eigenpair p;
      p.lambda = vals(c);
      p.vector.support = blk.indices;
      p.vector.values.resize(blk.indices.size());
      double top = 0.0;
      for (std::size_t l = 0; l < blk.indices.size(); ++l) {
        const double x = vecs(static_cast<Eigen::Index>(l), c);
        p.vector.values[l] = x;
        if (blk.indices[l] >= top_start) top += x * x;
      }
      p.truncation_flag = top >= 1e-6;
      const Eigen::VectorXd r = blk.matrix * vecs.col(c) - vals(c) * vecs.col(c);
      p.residual = r.norm();
      s.pairs.push_back(std::move(p));
    }
  }
  std::stable_sort(s.pairs.begin(), s.pairs.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return a.lambda < b.lambda; });
  for (std::size_t j = 0; j < s.pairs.size(); ++j) s.pairs[j].index = j;
  return s;
}

// ---------------------------------------------------------------------------
// Multipliers

double LittlewoodPaley::chi(double s) {
  s = std::abs(s);
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double a = std::exp(-1.0 / (2.0 - s));
  const double b = std::exp(-1.0 / (s - 1.0));
  return a / (a + b);
}

double LittlewoodPaley::beta(double s) { return chi(s) - chi(2.0 * s); }

double LittlewoodPaley::beta_ell(int ell, double s) {
  if (ell < 0) throw std::invalid_argument("beta_ell: ell must be >= 0");
  if (ell == 0) return chi(s);
  return beta(std::ldexp(std::abs(s), -ell));
}

std::vector<double> apply_multiplier(const ScalarMultiplier& m, double R, const HarmonicBasis& basis,
                                     std::span<const double> coeffs) {
  if (coeffs.size() != basis.size()) throw std::invalid_argument("apply_multiplier: length mismatch");
  std::vector<double> out(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = m(basis.sqrt_eigenvalue(i) / R) * coeffs[i];
  return out;
}

double multiplier_kernel_at(const ScalarMultiplier& m, double R, int dim, int max_degree, double distance) {
  if (dim == 1) {
    double s = m(0.0);
    for (int k = 1; k <= max_degree; ++k) s += 2.0 * m(k / R) * std::cos(k * distance);
    return s / (2.0 * kPi);
  }
  const double x = std::cos(distance);
  double p0 = 1.0, p1 = x, s = m(0.0) / (4.0 * kPi);
  for (int k = 1; k <= max_degree; ++k) {
    const double pk = k == 1 ? p1 : ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    if (k >= 2) {
      p0 = p1;
      p1 = pk;
    }
    const double lam = std::sqrt(static_cast<double>(k) * (k + 1.0));
    s += m(lam / R) * (2.0 * k + 1.0) / (4.0 * kPi) * pk;
  }
  return s;
}

Eigen::MatrixXd multiplier_kernel(const ScalarMultiplier& m, double R, const HarmonicBasis& basis) {
  const auto& lat = basis.grid().lattice();
  const auto n = static_cast<Eigen::Index>(lat.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double d = geodesic_distance(lat, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      k(i, j) = k(j, i) = multiplier_kernel_at(m, R, basis.dim(), basis.max_degree(), d);
    }
  return k;
}

EnvelopeFit fit_kernel_envelope(const ScalarMultiplier& m, double R, int dim, int max_degree, int decay_power,
                                std::span<const double> distances) {
  EnvelopeFit fit;
  for (double d : distances) {
    const double c = std::abs(multiplier_kernel_at(m, R, dim, max_degree, d)) *
                     std::pow(1.0 + R * d, decay_power) * std::pow(R, -dim);
    if (c > fit.constant) {
      fit.constant = c;
      fit.argmax_distance = d;
    }
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Cluster projectors

ClusterProjector cluster_projector(const Spectrum& spectrum, double lambda, double width) {
  ClusterProjector cp;
  cp.members = spectrum.window(lambda, lambda + width);
  cp.empty = cp.members.empty();
  const std::size_t n = spectrum.basis->size();
  // Members sharing a support come from the same block of the decomposed operator.
  std::map<std::vector<std::size_t>, Eigen::MatrixXd> acc;
  for (std::size_t j : cp.members) {
    const auto& v = spectrum.pairs[j].vector;
    Eigen::Map<const Eigen::VectorXd> x(v.values.data(), static_cast<Eigen::Index>(v.values.size()));
    auto it = acc.find(v.support);
    if (it == acc.end())
      it = acc.emplace(v.support, Eigen::MatrixXd::Zero(x.size(), x.size())).first;
    it->second.noalias() += x * x.transpose();
  }
  std::vector<BlockOperator::Block> blocks;
  std::vector<bool> covered(n, false);
  for (auto& [support, mat] : acc) {
    for (std::size_t g : support) covered[g] = true;
    blocks.push_back({support, std::move(mat)});
  }
  for (std::size_t g = 0; g < n; ++g)
    if (!covered[g]) blocks.push_back({{g}, Eigen::MatrixXd::Zero(1, 1)});
  cp.op = {spectrum.basis, BlockOperator::from_blocks(n, std::move(blocks)), true, OperatorTag::Projector, false};
  return cp;
}

SpectralMap SpectralMap::from_spectrum(const Spectrum& spectrum, std::span<const std::size_t> members,
                                       const std::function<std::complex<double>(double)>& multiplier) {
  SpectralMap m;
  m.dim = spectrum.basis->size();
  for (std::size_t j : members) {
    m.vectors.push_back(spectrum.pairs.at(j).vector);
    m.multipliers.push_back(multiplier(spectrum.pairs[j].lambda));
  }
  return m;
}

SpectralMap SpectralMap::from_vectors(std::size_t dim, std::vector<std::vector<double>> vectors) {
  SpectralMap m;
  m.dim = dim;
  for (auto& v : vectors) {
    if (v.size() != dim) throw std::invalid_argument("SpectralMap::from_vectors: length mismatch");
    const double nv = euclidean_norm(v);
    SparseVector s;
    for (std::size_t i = 0; i < dim; ++i)
      if (v[i] != 0.0) {
        s.support.push_back(i);
        s.values.push_back(v[i] / nv);
      }
    m.vectors.push_back(std::move(s));
    m.multipliers.emplace_back(1.0, 0.0);
  }
  return m;
}

bool SpectralMap::is_real() const {
  return std::all_of(multipliers.begin(), multipliers.end(), [](auto d) { return d.imag() == 0.0; });
}

void SpectralMap::forward(std::span<const double> f, std::vector<double>& re, std::vector<double>& im) const {
  re.assign(dim, 0.0);
  im.assign(dim, 0.0);
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    const double s = vectors[j].dot(f);
    if (s == 0.0) continue;
    vectors[j].axpy(multipliers[j].real() * s, re);
    if (multipliers[j].imag() != 0.0) vectors[j].axpy(multipliers[j].imag() * s, im);
  }
}

std::vector<double> SpectralMap::adjoint(std::span<const double> h_re, std::span<const double> h_im) const {
  std::vector<double> out(dim, 0.0);
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    double s = multipliers[j].real() * vectors[j].dot(h_re);
    if (multipliers[j].imag() != 0.0) s += multipliers[j].imag() * vectors[j].dot(h_im);
    if (s != 0.0) vectors[j].axpy(s, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Norm estimation

QuadratureGrid norm_grid(const HarmonicBasis& basis, int factor) {
  const int degree = std::max(factor, 2) * std::max(basis.max_degree(), 1);
  return basis.dim() == 1 ? make_circle_grid_for_degree(degree) : make_sphere_grid_for_degree(degree);
}

double norm_2_to_inf_exact(const SpectralMap& map, const HarmonicBasis& basis, const Lattice& lattice) {
  const Evaluator ev = basis.make_evaluator(lattice);
  std::vector<double> acc(lattice.size(), 0.0);
  for (std::size_t j = 0; j < map.vectors.size(); ++j) {
    const double d2 = std::norm(map.multipliers[j]);
    if (d2 == 0.0) continue;
    const auto v = ev.synthesize(map.vectors[j].dense(map.dim));
    for (std::size_t x = 0; x < v.size(); ++x) acc[x] += d2 * v[x] * v[x];
  }
  return std::sqrt(*std::max_element(acc.begin(), acc.end()));
}

NormEstimate operator_norm_2_to_p(const SpectralMap& map, const HarmonicBasis& basis, double p,
                                  const QuadratureGrid& eval_grid, const NormOptions& options) {
  if (!(p >= 2.0)) throw std::invalid_argument("operator_norm_2_to_p: requires 2 <= p <= infinity");
  NormEstimate est;
  if (std::isinf(p)) {
    // Refinement convention: double the sup lattice until the value moves < 1%.
    double prev = norm_2_to_inf_exact(map, basis, sup_lattice(basis, 2));
    double cur = prev;
    for (int f = 4; f <= 16; f *= 2) {
      cur = norm_2_to_inf_exact(map, basis, sup_lattice(basis, f));
      if (std::abs(cur - prev) <= 0.01 * cur) break;
      prev = cur;
    }
    est.value = std::max(cur, prev);
    est.converged = true;
    est.exact = true;
    return est;
  }
  if (eval_grid.dim() != basis.dim()) throw std::invalid_argument("operator_norm_2_to_p: grid dimension mismatch");
  const Evaluator ev = basis.make_evaluator(eval_grid.lattice());
  const auto w = eval_grid.weights();
  const bool real = map.is_real();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  const std::size_t n = map.dim;
  std::vector<double> re, im, u, v(eval_grid.size(), 0.0), gu(eval_grid.size()), gv(eval_grid.size());
  auto evaluate = [&](const std::vector<double>& f) {
    map.forward(f, re, im);
    u = ev.synthesize(re);
    if (!real) v = ev.synthesize(im);
    return lp_norm_complex(u, v, eval_grid, p);
  };
  for (int s = 0; s < options.starts; ++s) {
    std::vector<double> f(n);
    for (auto& x : f) x = normal(rng);
    double nf = euclidean_norm(f);
    for (auto& x : f) x /= nf;
    double value = evaluate(f);
    int it = 0;
    bool converged = false;
    for (; it < options.max_iterations; ++it) {
      if (value == 0.0) break;
      // Duality map of T f in L^p, weighted for the quadrature inner product.
      for (std::size_t q = 0; q < u.size(); ++q) {
        const double a = std::hypot(u[q], v[q]);
        const double g = a == 0.0 ? 0.0 : std::pow(a, p - 2.0) * w[q];
        gu[q] = g * u[q];
        gv[q] = g * v[q];
      }
      const auto hre = ev.adjoint(gu);
      const auto him = real ? std::vector<double>(n, 0.0) : ev.adjoint(gv);
      auto fn = map.adjoint(hre, him);
      nf = euclidean_norm(fn);
      if (nf == 0.0) break;
      for (auto& x : fn) x /= nf;
      const double next = evaluate(fn);
      const double change = std::abs(next - value) / std::max(next, 1e-300);
      if (next >= value) {
        f.swap(fn);
        value = next;
      }
      if (change < options.tolerance) {
        converged = true;
        ++it;
        break;
      }
    }
    est.start_values.push_back(value);
    if (value > est.value) {
      est.value = value;
      est.iterations = it;
      est.converged = converged;
    }
  }
  return est;
}

NormEstimate resolvent_norm(const Spectrum& spectrum, double lambda, double p, const QuadratureGrid& eval_grid,
                            const NormOptions& options) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("resolvent_norm: requires lambda >= 1");
  std::vector<std::size_t> all(spectrum.pairs.size());
  std::iota(all.begin(), all.end(), 0);
  const auto map = SpectralMap::from_spectrum(spectrum, all, [lambda](double mu) {
    return 1.0 / std::complex<double>(mu - lambda, -1.0);
  });
  return operator_norm_2_to_p(map, *spectrum.basis, p, eval_grid, options);
}

}  // namespace steklov
