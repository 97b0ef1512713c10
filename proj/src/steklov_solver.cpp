#include "steklov/steklov_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace steklov {

double critical_exponent(int dim) {
  if (dim < 1) throw std::invalid_argument("critical_exponent: dim must be >= 1");
  if (dim == 1) return kInfinity;
  return 2.0 * (dim + 1) / (dim - 1);
}

double sigma(double p, int dim) {
  if (dim < 1) throw std::invalid_argument("sigma: dim must be >= 1");
  if (!(p >= 2.0)) throw std::invalid_argument("sigma: requires p >= 2");
  if (dim == 1) return 0.0;
  const double h = 0.5 * (dim - 1);
  const double inv = std::isinf(p) ? 0.0 : 1.0 / p;
  if (p < critical_exponent(dim)) return h * (0.5 - inv);
  return h - dim * inv;
}

Spectrum solve_spectrum(const PotentialField& potential, std::shared_ptr<const HarmonicBasis> basis) {
  const auto dtn = assemble_dtn(basis);
  if (potential.is_zero()) return eigendecompose(dtn);
  return eigendecompose(compose_sum(dtn, assemble_multiplication(potential, basis)));
}

SolidGrid make_extension_grid(const HarmonicBasis& basis, int p_max) {
  if (p_max < 2) throw std::invalid_argument("make_extension_grid: p_max must be >= 2");
  const int K = std::max(basis.max_degree(), 1);
  const int d = p_max * K;
  auto boundary = basis.dim() == 1 ? make_circle_grid_for_degree(d) : make_sphere_grid_for_degree(d);
  return make_solid_grid(std::move(boundary), static_cast<std::size_t>(d / 2 + 2));
}

ExtensionProfile::ExtensionProfile(std::shared_ptr<const HarmonicBasis> basis, std::vector<double> coefficients,
                                   std::shared_ptr<const SolidGrid> solid)
    : basis_(std::move(basis)), coefficients_(std::move(coefficients)), solid_(std::move(solid)) {
  if (coefficients_.size() != basis_->size()) throw std::invalid_argument("ExtensionProfile: length mismatch");
  if (solid_->boundary.dim() != basis_->dim()) throw std::invalid_argument("ExtensionProfile: dimension mismatch");
  const Evaluator ev = basis_->make_evaluator(solid_->boundary.lattice());
  for (int k = 0; k <= basis_->max_degree(); ++k) {
    const std::size_t lo = basis_->degree_offset(k), hi = lo + basis_->multiplicity(k);
    std::vector<double> part(basis_->size(), 0.0);
    bool any = false;
    for (std::size_t i = lo; i < hi; ++i)
      if (coefficients_[i] != 0.0) {
        part[i] = coefficients_[i];
        any = true;
      }
    if (any) components_.push_back({k, ev.synthesize(part)});
  }
}

double ExtensionProfile::value(double r, std::size_t node) const {
  double s = 0.0;
  for (const auto& c : components_) s += std::pow(r, c.degree) * c.values.at(node);
  return s;
}

std::vector<double> ExtensionProfile::trace(double r) const {
  std::vector<double> u(solid_->boundary.size(), 0.0);
  for (const auto& c : components_) {
    const double rk = std::pow(r, c.degree);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += rk * c.values[i];
  }
  return u;
}

double ExtensionProfile::interior_norm(double p) const {
  if (std::isinf(p)) return ball_sup(1.0);
  if (components_.empty()) return 0.0;
  return solid_lp_norm(components_, *solid_, p);
}

double ExtensionProfile::boundary_norm(double p) const {
  if (std::isinf(p)) return sup_norm(*basis_, coefficients_);
  return lp_norm(trace(1.0), solid_->boundary, p);
}

double ExtensionProfile::ball_sup(double radius) const {
  if (!(radius >= 0.0 && radius <= 1.0)) throw std::invalid_argument("ball_sup: radius must be in [0, 1]");
  std::vector<double> c = coefficients_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::pow(radius, basis_->mode(i).degree);
  return sup_norm(*basis_, c);
}

ExtensionProfile extend_harmonically(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                                     std::shared_ptr<const SolidGrid> solid) {
  return ExtensionProfile(std::move(basis), std::vector<double>(coefficients.begin(), coefficients.end()),
                          std::move(solid));
}

double interior_boundary_ratio(const ExtensionProfile& profile, double p) {
  const double b = profile.boundary_norm(p);
  if (b == 0.0) throw std::invalid_argument("interior_boundary_ratio: zero boundary norm");
  return profile.interior_norm(p) / b;
}

double dyadic_extension_bound(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                              int ell, double p, std::shared_ptr<const SolidGrid> solid) {
  if (ell < 0) throw std::invalid_argument("dyadic_extension_bound: ell must be >= 0");
  const double lam_max = std::sqrt(HarmonicBasis::laplace_eigenvalue_of_degree(basis->dim(), basis->max_degree()));
  if (std::ldexp(1.0, ell + 1) > lam_max)
    throw std::out_of_range("dyadic_extension_bound: band 2^(l+1) exceeds the basis resolution");
  const auto filtered = apply_multiplier([ell](double s) { return LittlewoodPaley::beta_ell(ell, s); }, 1.0, *basis,
                                         coefficients);
  const ExtensionProfile full(basis, std::vector<double>(coefficients.begin(), coefficients.end()), solid);
  const double denom = full.boundary_norm(p);
  if (denom == 0.0) throw std::invalid_argument("dyadic_extension_bound: zero trace");
  const ExtensionProfile band(basis, filtered, solid);
  return band.interior_norm(p) / denom;
}

DecayProfile interior_decay_profile(const HarmonicBasis& basis, std::span<const double> coefficients, double lambda,
                                    std::span<const double> deltas) {
  DecayProfile out;
  const double top = sup_norm(basis, coefficients);
  if (top == 0.0) throw std::invalid_argument("interior_decay_profile: zero function");
  std::vector<double> c(coefficients.size());
  for (double delta : deltas) {
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("interior_decay_profile: delta must be in [0, 1)");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coefficients[i] * std::pow(1.0 - delta, basis.mode(i).degree);
    const double s = delta == 0.0 ? top : sup_norm(basis, c);
    out.points.push_back({delta, s, s / top});
  }
  // log(ratio) = a - c * (lambda delta)
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t n = 0;
  for (const auto& pt : out.points) {
    if (pt.ratio <= 0.0) continue;
    const double x = lambda * pt.delta, y = std::log(pt.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  if (n >= 2) {
    const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
    if (vx > 0.0) {
      out.rate = -cxy / vx;
      out.r_squared = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
    }
  }
  return out;
}

AprioriPair dirichlet_apriori_check(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                                    std::shared_ptr<const SolidGrid> solid) {
  AprioriPair pair;
  double h = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    h += coefficients[i] * coefficients[i] / std::sqrt(1.0 + basis->laplace_eigenvalue(i));
  pair.trace_h_minus_half = std::sqrt(h);
  const ExtensionProfile u(std::move(basis), std::vector<double>(coefficients.begin(), coefficients.end()),
                           std::move(solid));
  pair.interior_l2 = u.interior_norm(2.0);
  return pair;
}

std::size_t counting_function(const Spectrum& spectrum, double Lambda) {
  return static_cast<std::size_t>(
      std::count_if(spectrum.pairs.begin(), spectrum.pairs.end(), [Lambda](const Eigenpair& e) { return e.lambda <= Lambda; }));
}

std::vector<std::vector<double>> cluster_vectors(const Spectrum& spectrum, double lambda) {
  std::vector<std::vector<double>> out;
  for (std::size_t j : spectrum.window(lambda, lambda + 1.0))
    out.push_back(spectrum.pairs[j].coefficients(spectrum.basis->size()));
  return out;
}

}  // namespace steklov
