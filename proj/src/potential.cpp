#include "steklov/potential.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace steklov {

namespace {

std::shared_ptr<const HarmonicBasis> series_basis_for(int dim, int degree) {
  auto grid = dim == 1 ? make_circle_grid_for_degree(2 * degree) : make_sphere_grid_for_degree(2 * degree);
  return std::make_shared<const HarmonicBasis>(dim, degree, std::move(grid));
}

// Lattice avoiding the poles so that (1/sin) d/dphi is finite.
Lattice fine_lattice(int dim, int degree) {
  const std::size_t n = static_cast<std::size_t>(16 * (degree + 1));
  if (dim == 1) return make_circle_lattice(2 * n);
  Lattice lat;
  lat.dim = 2;
  lat.colatitudes.resize(n);
  for (std::size_t i = 0; i < n; ++i) lat.colatitudes[i] = kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  lat.longitudes = make_circle_lattice(2 * n).longitudes;
  return lat;
}

}  // namespace

PotentialField::PotentialField(std::shared_ptr<const HarmonicBasis> series_basis,
                               std::vector<double> coefficients, std::string name)
    : series_basis_(std::move(series_basis)), coefficients_(std::move(coefficients)), name_(std::move(name)) {
  if (coefficients_.size() != series_basis_->size())
    throw std::invalid_argument("PotentialField: coefficient length mismatch");
  degree_ = 0;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (coefficients_[i] == 0.0) continue;
    const auto& md = series_basis_->mode(i);
    is_zero_ = false;
    degree_ = std::max(degree_, md.degree);
    if (dim() == 2 && md.order != 0) zonal_ = false;
    if (dim() == 1 && md.sine) even_ = false;
  }
  const auto lat = fine_lattice(dim(), series_basis_->max_degree());
  const Evaluator ev = series_basis_->make_evaluator(lat, true);
  const auto v = ev.synthesize(coefficients_);
  for (double x : v) sup_norm_ = std::max(sup_norm_, std::abs(x));
  if (dim() == 1) {
    const auto d = ev.synthesize(coefficients_, Derivative::DTheta);
    for (double x : d) gradient_sup_ = std::max(gradient_sup_, std::abs(x));
    const std::size_t n = v.size();
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = (j + 1) % n;
      const double dist = circle_distance(lat.longitudes[j], lat.longitudes[k]);
      lipschitz_ = std::max(lipschitz_, std::abs(v[j] - v[k]) / dist);
    }
  } else {
    const auto dt = ev.synthesize(coefficients_, Derivative::DTheta);
    const auto dp = ev.synthesize(coefficients_, Derivative::DPhiOverSin);
    for (std::size_t i = 0; i < v.size(); ++i) gradient_sup_ = std::max(gradient_sup_, std::hypot(dt[i], dp[i]));
    const std::size_t nlat = lat.num_lat(), nlon = lat.num_lon();
    for (std::size_t i = 0; i < nlat; ++i)
      for (std::size_t j = 0; j < nlon; ++j) {
        const std::size_t a = i * nlon + j;
        const std::size_t b = i * nlon + (j + 1) % nlon;
        lipschitz_ = std::max(lipschitz_, std::abs(v[a] - v[b]) / geodesic_distance(lat, a, b));
        if (i + 1 < nlat) {
          const std::size_t c = (i + 1) * nlon + j;
          lipschitz_ = std::max(lipschitz_, std::abs(v[a] - v[c]) / geodesic_distance(lat, a, c));
        }
      }
  }
}

std::vector<double> PotentialField::sample(const Lattice& lattice) const {
  if (lattice.dim != dim()) throw std::invalid_argument("PotentialField::sample: dimension mismatch");
  if (is_zero_) return std::vector<double>(lattice.size(), 0.0);
  return series_basis_->make_evaluator(lattice).synthesize(coefficients_);
}

double PotentialField::value_at(double colatitude, double longitude) const {
  if (is_zero_) return 0.0;
  const auto& b = *series_basis_;
  if (dim() == 1) {
    double v = coefficients_[0] / std::sqrt(2.0 * kPi);
    for (int k = 1; k <= b.max_degree(); ++k)
      v += (coefficients_[b.index_of(k, k, false)] * std::cos(k * longitude) +
            coefficients_[b.index_of(k, k, true)] * std::sin(k * longitude)) /
           std::sqrt(kPi);
    return v;
  }
  std::vector<std::vector<double>> leg;
  normalized_legendre(b.max_degree(), colatitude, leg);
  double v = 0.0;
  for (int k = 0; k <= b.max_degree(); ++k)
    for (int m = 0; m <= k; ++m) {
      const double p = leg[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - m)];
      if (m == 0) {
        v += coefficients_[b.index_of(k, 0, false)] * p / std::sqrt(2.0 * kPi);
      } else {
        v += (coefficients_[b.index_of(k, m, false)] * std::cos(m * longitude) +
              coefficients_[b.index_of(k, m, true)] * std::sin(m * longitude)) *
             p / std::sqrt(kPi);
      }
    }
  return v;
}

double PotentialField::mean() const {
  return coefficients_[0] / std::sqrt(sphere_measure(dim()));
}

PotentialSpec PotentialSpec::parse(const std::string& text) {
  PotentialSpec s;
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string params = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (name == "zero") {
    s.family = Family::Zero;
  } else if (name == "constant") {
    s.family = Family::Constant;
    std::string v = params;
    if (v.rfind("c=", 0) == 0) v = v.substr(2);
    if (v.empty()) throw std::invalid_argument("potential constant: missing value");
    s.constant = std::stod(v);
  } else if (name == "cos-lowfreq") {
    s.family = Family::CosLowFreq;
  } else if (name == "random-lipschitz") {
    s.family = Family::RandomLipschitz;
    std::stringstream ss(params);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("potential parameter without '=': " + item);
      const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
      if (key == "seed")
        s.seed = std::stoull(val);
      else if (key == "cap")
        s.lipschitz_cap = std::stod(val);
      else if (key == "degree")
        s.degree = std::stoi(val);
      else if (key == "zonal")
        s.zonal = val == "1" || val == "true";
      else
        throw std::invalid_argument("unknown random-lipschitz parameter: " + key);
    }
    if (s.degree < 1) throw std::invalid_argument("random-lipschitz degree must be >= 1");
    if (!(s.lipschitz_cap > 0)) throw std::invalid_argument("random-lipschitz cap must be positive");
  } else {
    throw std::invalid_argument("unknown potential family: " + name);
  }
  return s;
}

std::string PotentialSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (family) {
    case Family::Zero: return "zero";
    case Family::Constant: os << "constant:" << constant; return os.str();
    case Family::CosLowFreq: return "cos-lowfreq";
    case Family::RandomLipschitz:
      os << "random-lipschitz:seed=" << seed << ",cap=" << lipschitz_cap << ",degree=" << degree
         << ",zonal=" << (zonal ? 1 : 0);
      return os.str();
  }
  return "zero";
}

PotentialField make_potential(int dim, const PotentialSpec& spec) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("make_potential: dim must be 1 or 2");
  switch (spec.family) {
    case PotentialSpec::Family::Zero: {
      auto b = series_basis_for(dim, 0);
      return PotentialField(b, std::vector<double>(b->size(), 0.0), spec.to_string());
    }
    case PotentialSpec::Family::Constant: {
      auto b = series_basis_for(dim, 0);
      return PotentialField(b, {spec.constant * std::sqrt(sphere_measure(dim))}, spec.to_string());
    }
    case PotentialSpec::Family::CosLowFreq: {
      // cos(theta) on S^1; cos(colatitude) = z on S^2.
      auto b = series_basis_for(dim, 1);
      std::vector<double> c(b->size(), 0.0);
      if (dim == 1)
        c[b->index_of(1, 1, false)] = std::sqrt(kPi);
      else
        c[b->index_of(1, 0, false)] = std::sqrt(4.0 * kPi / 3.0);
      return PotentialField(b, std::move(c), spec.to_string());
    }
    case PotentialSpec::Family::RandomLipschitz: {
      auto b = series_basis_for(dim, spec.degree);
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> c(b->size(), 0.0);
      for (std::size_t i = 0; i < b->size(); ++i) {
        const auto& md = b->mode(i);
        const double g = normal(rng);  // always drawn so the stream is layout-independent
        if (md.degree == 0) continue;
        if (dim == 2 && spec.zonal && md.order != 0) continue;
        c[i] = g / (static_cast<double>(md.degree) * md.degree);
      }
      PotentialField raw(b, c, spec.to_string());
      const double scale = spec.lipschitz_cap / raw.gradient_sup();
      for (double& x : c) x *= scale;
      return PotentialField(b, std::move(c), spec.to_string());
    }
  }
  throw std::logic_error("make_potential: unreachable");
}

}  // namespace steklov
