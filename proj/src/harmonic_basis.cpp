#include "steklov/harmonic_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace steklov {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;      // 1/sqrt(pi)
constexpr double kInvSqrt2Pi = 0.39894228040143267794;     // 1/sqrt(2 pi)

// Longitude normalization of the real basis on S^2.
double order_norm(int m) { return m == 0 ? kInvSqrt2Pi : kInvSqrtPi; }

}  // namespace

double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void normalized_legendre(int max_degree, double colatitude, std::vector<std::vector<double>>& table) {
  const double x = std::cos(colatitude);
  const double s = std::sin(colatitude);
  table.resize(static_cast<std::size_t>(max_degree) + 1);
  double pmm = 1.0 / std::sqrt(2.0);
  for (int m = 0; m <= max_degree; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    auto& col = table[static_cast<std::size_t>(m)];
    col.assign(static_cast<std::size_t>(max_degree - m) + 1, 0.0);
    col[0] = pmm;
    if (m + 1 <= max_degree) col[1] = std::sqrt(2.0 * m + 3.0) * x * pmm;
    for (int k = m + 2; k <= max_degree; ++k) {
      const double kk = k, mm = m;
      const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - mm * mm));
      const double b = std::sqrt(((kk - 1.0) * (kk - 1.0) - mm * mm) / (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0));
      col[static_cast<std::size_t>(k - m)] =
          a * (x * col[static_cast<std::size_t>(k - m - 1)] - b * col[static_cast<std::size_t>(k - m - 2)]);
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluator

Evaluator::Evaluator(int dim, int max_degree, Lattice lattice, bool with_derivatives)
    : dim_(dim),
      max_degree_(max_degree),
      num_modes_(HarmonicBasis::mode_count(dim, max_degree)),
      lattice_(std::move(lattice)),
      with_derivatives_(with_derivatives) {
  if (lattice_.dim != dim_) throw std::invalid_argument("Evaluator: lattice dimension mismatch");
  const auto K = static_cast<std::size_t>(max_degree_);
  if (dim_ == 1) {
    const std::size_t n = lattice_.longitudes.size();
    cos_table_.resize((K + 1) * n);
    sin_table_.resize((K + 1) * n);
    for (std::size_t k = 0; k <= K; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        const double a = static_cast<double>(k) * lattice_.longitudes[j];
        cos_table_[k * n + j] = std::cos(a);
        sin_table_[k * n + j] = std::sin(a);
      }
    return;
  }
  const std::size_t nlat = lattice_.colatitudes.size();
  const std::size_t nlon = lattice_.longitudes.size();
  cos_table_.resize((K + 1) * nlon);
  sin_table_.resize((K + 1) * nlon);
  for (std::size_t m = 0; m <= K; ++m)
    for (std::size_t j = 0; j < nlon; ++j) {
      const double a = static_cast<double>(m) * lattice_.longitudes[j];
      cos_table_[m * nlon + j] = std::cos(a) * order_norm(static_cast<int>(m));
      sin_table_[m * nlon + j] = std::sin(a) * order_norm(static_cast<int>(m));
    }
  offset_.resize(K + 2);
  offset_[0] = 0;
  for (std::size_t m = 0; m <= K; ++m) offset_[m + 1] = offset_[m] + (K + 1 - m) * nlat;
  legendre_.resize(offset_[K + 1]);
  if (with_derivatives_) {
    dlegendre_.resize(offset_[K + 1]);
    legendre_over_sin_.resize(offset_[K + 1]);
  }
  std::vector<std::vector<double>> table;
  for (std::size_t i = 0; i < nlat; ++i) {
    const double th = lattice_.colatitudes[i];
    normalized_legendre(max_degree_, th, table);
    const double x = std::cos(th), s = std::sin(th);
    for (std::size_t m = 0; m <= K; ++m)
      for (std::size_t k = m; k <= K; ++k) {
        const std::size_t at = offset_[m] + (k - m) * nlat + i;
        const double p = table[m][k - m];
        legendre_[at] = p;
        if (!with_derivatives_) continue;
        // Pole rows carry no derivative information; callers exclude them.
        if (s < 1e-12) {
          dlegendre_[at] = 0.0;
          legendre_over_sin_[at] = 0.0;
          continue;
        }
        const double kk = static_cast<double>(k), mm = static_cast<double>(m);
        const double prev = k > m ? table[m][k - m - 1] : 0.0;
        const double c = k > m ? std::sqrt((2.0 * kk + 1.0) / (2.0 * kk - 1.0) * (kk * kk - mm * mm)) : 0.0;
        dlegendre_[at] = (kk * x * p - c * prev) / s;
        legendre_over_sin_[at] = p / s;
      }
  }
}

std::vector<double> Evaluator::synthesize(std::span<const double> coeffs, Derivative kind) const {
  if (coeffs.size() != num_modes_) throw std::invalid_argument("synthesize: coefficient length mismatch");
  if (kind != Derivative::Value && !with_derivatives_ && dim_ == 2)
    throw std::logic_error("synthesize: evaluator built without derivative tables");
  const auto K = static_cast<std::size_t>(max_degree_);
  std::vector<double> out(lattice_.size(), 0.0);
  if (dim_ == 1) {
    const std::size_t n = lattice_.longitudes.size();
    for (std::size_t k = 0; k <= K; ++k) {
      const double kd = static_cast<double>(k);
      double a, b;  // coefficients of cos(k t), sin(k t) after differentiation
      if (k == 0) {
        if (kind != Derivative::Value) continue;
        a = coeffs[0] * kInvSqrt2Pi;
        b = 0.0;
      } else {
        const double c = coeffs[2 * k - 1] * kInvSqrtPi;
        const double s = coeffs[2 * k] * kInvSqrtPi;
        switch (kind) {
          case Derivative::Value: a = c; b = s; break;
          case Derivative::DTheta: a = kd * s; b = -kd * c; break;
          case Derivative::D2Theta: a = -kd * kd * c; b = -kd * kd * s; break;
          default: throw std::invalid_argument("synthesize: derivative kind not defined on S^1");
        }
      }
      if (a == 0.0 && b == 0.0) continue;
      const double* ct = &cos_table_[k * n];
      const double* st = &sin_table_[k * n];
      for (std::size_t j = 0; j < n; ++j) out[j] += a * ct[j] + b * st[j];
    }
    return out;
  }
  if (kind == Derivative::D2Theta) throw std::invalid_argument("synthesize: D2Theta is S^1 only");
  const std::size_t nlat = lattice_.colatitudes.size();
  const std::size_t nlon = lattice_.longitudes.size();
  const std::vector<double>& leg =
      kind == Derivative::DTheta ? dlegendre_ : (kind == Derivative::DPhiOverSin ? legendre_over_sin_ : legendre_);
  std::vector<double> acos(nlat), asin(nlat);
  for (std::size_t m = 0; m <= K; ++m) {
    bool any = false;
    for (std::size_t k = m; k <= K && !any; ++k) {
      const auto ic = HarmonicBasis::mode_index(2, static_cast<int>(k), static_cast<int>(m), false);
      if (coeffs[ic] != 0.0) any = true;
      if (m > 0 && coeffs[ic + 1] != 0.0) any = true;
    }
    if (!any) continue;
    std::fill(acos.begin(), acos.end(), 0.0);
    std::fill(asin.begin(), asin.end(), 0.0);
    for (std::size_t k = m; k <= K; ++k) {
      const auto ic = HarmonicBasis::mode_index(2, static_cast<int>(k), static_cast<int>(m), false);
      const double cc = coeffs[ic];
      const double cs = m > 0 ? coeffs[ic + 1] : 0.0;
      if (cc == 0.0 && cs == 0.0) continue;
      const double* row = &leg[offset_[m] + (k - m) * nlat];
      for (std::size_t i = 0; i < nlat; ++i) {
        acos[i] += cc * row[i];
        asin[i] += cs * row[i];
      }
    }
    const double* ct = &cos_table_[m * nlon];
    const double* st = &sin_table_[m * nlon];
    const double md = static_cast<double>(m);
    for (std::size_t i = 0; i < nlat; ++i) {
      double a = acos[i], b = asin[i];
      if (kind == Derivative::DPhiOverSin) {
        // d/dphi: cos(m phi) -> -m sin(m phi), sin(m phi) -> m cos(m phi)
        const double na = md * b, nb = -md * a;
        a = na;
        b = nb;
      }
      if (a == 0.0 && b == 0.0) continue;
      double* o = &out[i * nlon];
      for (std::size_t j = 0; j < nlon; ++j) o[j] += a * ct[j] + b * st[j];
    }
  }
  return out;
}

std::vector<double> Evaluator::adjoint(std::span<const double> values) const {
  if (values.size() != lattice_.size()) throw std::invalid_argument("adjoint: value length mismatch");
  const auto K = static_cast<std::size_t>(max_degree_);
  std::vector<double> out(num_modes_, 0.0);
  if (dim_ == 1) {
    const std::size_t n = lattice_.longitudes.size();
    for (std::size_t k = 0; k <= K; ++k) {
      const double* ct = &cos_table_[k * n];
      const double* st = &sin_table_[k * n];
      double a = 0.0, b = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        a += values[j] * ct[j];
        b += values[j] * st[j];
      }
      if (k == 0) {
        out[0] = a * kInvSqrt2Pi;
      } else {
        out[2 * k - 1] = a * kInvSqrtPi;
        out[2 * k] = b * kInvSqrtPi;
      }
    }
    return out;
  }
  const std::size_t nlat = lattice_.colatitudes.size();
  const std::size_t nlon = lattice_.longitudes.size();
  std::vector<double> bcos(nlat), bsin(nlat);
  for (std::size_t m = 0; m <= K; ++m) {
    const double* ct = &cos_table_[m * nlon];
    const double* st = &sin_table_[m * nlon];
    for (std::size_t i = 0; i < nlat; ++i) {
      const double* v = &values[i * nlon];
      double a = 0.0, b = 0.0;
      for (std::size_t j = 0; j < nlon; ++j) {
        a += v[j] * ct[j];
        b += v[j] * st[j];
      }
      bcos[i] = a;
      bsin[i] = b;
    }
    for (std::size_t k = m; k <= K; ++k) {
      const double* row = &legendre_[offset_[m] + (k - m) * nlat];
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < nlat; ++i) {
        a += bcos[i] * row[i];
        b += bsin[i] * row[i];
      }
      const auto ic = HarmonicBasis::mode_index(2, static_cast<int>(k), static_cast<int>(m), false);
      out[ic] = a;
      if (m > 0) out[ic + 1] = b;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// HarmonicBasis

std::size_t HarmonicBasis::mode_index(int dim, int degree, int order, bool sine) {
  if (dim == 1) {
    if (degree == 0) return 0;
    return static_cast<std::size_t>(2 * degree - 1 + (sine ? 1 : 0));
  }
  const auto k = static_cast<std::size_t>(degree);
  if (order == 0) return k * k;
  return k * k + static_cast<std::size_t>(2 * order - 1 + (sine ? 1 : 0));
}

std::size_t HarmonicBasis::mode_count(int dim, int max_degree) {
  const auto K = static_cast<std::size_t>(max_degree);
  return dim == 1 ? 2 * K + 1 : (K + 1) * (K + 1);
}

HarmonicBasis::HarmonicBasis(int dim, int max_degree, QuadratureGrid grid)
    : dim_(dim), max_degree_(max_degree), grid_(std::move(grid)) {
  if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("HarmonicBasis: dim must be 1 or 2");
  if (max_degree_ < 0) throw std::invalid_argument("HarmonicBasis: max_degree must be >= 0");
  if (grid_.dim() != dim_) throw std::invalid_argument("HarmonicBasis: grid dimension mismatch");
  if (grid_.exactness_degree() < 2 * max_degree_)
    throw std::invalid_argument("HarmonicBasis: grid exactness " + std::to_string(grid_.exactness_degree()) +
                                " below 2*max_degree = " + std::to_string(2 * max_degree_));
  modes_.reserve(mode_count(dim_, max_degree_));
  for (int k = 0; k <= max_degree_; ++k) {
    if (dim_ == 1) {
      if (k == 0) {
        modes_.push_back({0, 0, false});
      } else {
        modes_.push_back({k, k, false});
        modes_.push_back({k, k, true});
      }
      continue;
    }
    modes_.push_back({k, 0, false});
    for (int m = 1; m <= k; ++m) {
      modes_.push_back({k, m, false});
      modes_.push_back({k, m, true});
    }
  }
  evaluator_ = std::make_shared<const Evaluator>(dim_, max_degree_, grid_.lattice(), false);
}

std::size_t HarmonicBasis::index_of(int degree, int order, bool sine) const {
  if (degree < 0 || degree > max_degree_) throw std::out_of_range("index_of: degree out of range");
  if (dim_ == 2 && (order < 0 || order > degree || (order == 0 && sine)))
    throw std::out_of_range("index_of: invalid order");
  if (dim_ == 1 && degree == 0 && sine) throw std::out_of_range("index_of: no sine mode at degree 0");
  return mode_index(dim_, degree, order, sine);
}

std::size_t HarmonicBasis::multiplicity(int degree) const {
  if (dim_ == 1) return degree == 0 ? 1 : 2;
  return static_cast<std::size_t>(2 * degree + 1);
}

std::size_t HarmonicBasis::degree_offset(int degree) const {
  if (dim_ == 1) return degree == 0 ? 0 : static_cast<std::size_t>(2 * degree - 1);
  return static_cast<std::size_t>(degree) * static_cast<std::size_t>(degree);
}

double HarmonicBasis::laplace_eigenvalue_of_degree(int dim, int degree) {
  const double k = degree;
  return k * (k + dim - 1);
}

double HarmonicBasis::laplace_eigenvalue(std::size_t mode_index) const {
  return laplace_eigenvalue_of_degree(dim_, modes_.at(mode_index).degree);
}

double HarmonicBasis::sqrt_eigenvalue(std::size_t mode_index) const {
  return std::sqrt(laplace_eigenvalue(mode_index));
}

std::vector<double> HarmonicBasis::synthesize(std::span<const double> coeffs) const {
  return evaluator_->synthesize(coeffs);
}

std::vector<double> HarmonicBasis::analyze(std::span<const double> values) const {
  if (values.size() != grid_.size()) throw std::invalid_argument("analyze: value length mismatch");
  std::vector<double> weighted(values.size());
  const auto w = grid_.weights();
  for (std::size_t i = 0; i < values.size(); ++i) weighted[i] = values[i] * w[i];
  return evaluator_->adjoint(weighted);
}

double HarmonicBasis::energy_leak(const std::function<double(double, double)>& f) const {
  const int K2 = 2 * std::max(max_degree_, 1);
  const HarmonicBasis fine(dim_, K2, dim_ == 1 ? make_circle_grid_for_degree(2 * K2) : make_sphere_grid_for_degree(2 * K2));
  const auto& g = fine.grid();
  std::vector<double> v(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) v[q] = f(g.colatitude(q), g.longitude(q));
  const auto c = fine.analyze(v);
  double total = 0.0, above = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    total += c[i] * c[i];
    if (fine.mode(i).degree > max_degree_) above += c[i] * c[i];
  }
  return total == 0.0 ? 0.0 : above / total;
}

// ---------------------------------------------------------------------------
// Model families

std::vector<double> zonal_coefficients(const HarmonicBasis& basis, int degree, double pole_colatitude,
                                       double pole_longitude) {
  if (degree < 0 || degree > basis.max_degree())
    throw std::out_of_range("zonal_harmonic: degree exceeds basis max_degree");
  std::vector<double> c(basis.size(), 0.0);
  if (basis.dim() == 1) {
    if (degree == 0) {
      c[0] = 1.0;
      return c;
    }
    c[basis.index_of(degree, degree, false)] = std::cos(degree * pole_longitude);
    c[basis.index_of(degree, degree, true)] = std::sin(degree * pole_longitude);
    return c;
  }
  // Addition theorem: Z(x) = sqrt(4 pi / (2k+1)) sum_m Y_m(pole) Y_m(x).
  std::vector<std::vector<double>> table;
  normalized_legendre(degree, pole_colatitude, table);
  const double scale = std::sqrt(4.0 * kPi / (2.0 * degree + 1.0));
  for (int m = 0; m <= degree; ++m) {
    const double p = table[static_cast<std::size_t>(m)][static_cast<std::size_t>(degree - m)];
    if (m == 0) {
      c[basis.index_of(degree, 0, false)] = scale * p * order_norm(0);
    } else {
      c[basis.index_of(degree, m, false)] = scale * p * order_norm(m) * std::cos(m * pole_longitude);
      c[basis.index_of(degree, m, true)] = scale * p * order_norm(m) * std::sin(m * pole_longitude);
    }
  }
  return c;
}

std::vector<double> zonal_harmonic(const HarmonicBasis& basis, int degree, double pole_colatitude,
                                   double pole_longitude) {
  return basis.synthesize(zonal_coefficients(basis, degree, pole_colatitude, pole_longitude));
}

std::vector<double> highest_weight_coefficients(const HarmonicBasis& basis, int degree) {
  if (basis.dim() != 2) throw std::invalid_argument("highest_weight_harmonic: defined on S^2 only");
  if (degree < 0 || degree > basis.max_degree())
    throw std::out_of_range("highest_weight_harmonic: degree exceeds basis max_degree");
  std::vector<double> c(basis.size(), 0.0);
  c[basis.index_of(degree, degree, false)] = 1.0;
  return c;
}

std::vector<double> highest_weight_harmonic(const HarmonicBasis& basis, int degree) {
  return basis.synthesize(highest_weight_coefficients(basis, degree));
}

Lattice sup_lattice(const HarmonicBasis& basis, int oversample) {
  const auto K = static_cast<std::size_t>(basis.max_degree());
  const auto f = static_cast<std::size_t>(std::max(oversample, 1));
  if (basis.dim() == 1) return make_circle_lattice(f * (2 * K + 2));
  return make_sphere_lattice_with_poles(f * (K + 1) + 1, 2 * f * (K + 1));
}

const Evaluator& sup_evaluator(const HarmonicBasis& basis, int oversample) {
  std::lock_guard<std::mutex> lock(*basis.cache_mutex_);
  auto& cache = *basis.sup_cache_;
  auto it = cache.find(oversample);
  if (it == cache.end())
    it = cache.emplace(oversample, std::make_shared<const Evaluator>(basis.make_evaluator(sup_lattice(basis, oversample))))
             .first;
  return *it->second;
}

double sup_norm(const HarmonicBasis& basis, std::span<const double> coeffs) {
  auto max_on = [&](int f) {
    const auto v = sup_evaluator(basis, f).synthesize(coeffs);
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  double prev = max_on(2);
  for (int f = 4; f <= 32; f *= 2) {
    const double cur = max_on(f);
    if (std::abs(cur - prev) <= 0.01 * std::max(cur, 1e-300)) return std::max(cur, prev);
    prev = cur;
  }
  return prev;
}

}  // namespace steklov
