#include "steklov/nodal.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace steklov {

namespace {

std::size_t lattice_points(const HarmonicBasis& b, int refinement) {
  return static_cast<std::size_t>(refinement) * static_cast<std::size_t>(b.max_degree() + 1);
}

Lattice contour_lattice(const HarmonicBasis& b, int refinement) {
  if (refinement < 4) throw std::invalid_argument("nodal: refinement must be >= 4");
  const std::size_t n = lattice_points(b, refinement);
  if (b.dim() == 1) return make_circle_lattice(2 * n);
  return make_sphere_lattice_with_poles(n + 1, 2 * n);
}

QuadratureGrid mask_grid_for(const HarmonicBasis& b, int refinement) {
  const std::size_t n = lattice_points(b, std::max(refinement, 4));
  if (b.dim() == 1) return make_circle_grid(2 * n);
  return make_sphere_grid(n, 2 * n);
}

// Trigonometric series on S^1: value and first two derivatives at one angle.
struct CircleSeries {
  const HarmonicBasis& basis;
  std::span<const double> c;

  void eval(double t, double& v, double& d1, double& d2) const {
    const double a0 = 1.0 / std::sqrt(2.0 * kPi), a = 1.0 / std::sqrt(kPi);
    v = c[0] * a0;
    d1 = d2 = 0.0;
    for (int k = 1; k <= basis.max_degree(); ++k) {
      const double ck = c[basis.index_of(k, k, false)] * a, sk = c[basis.index_of(k, k, true)] * a;
      if (ck == 0.0 && sk == 0.0) continue;
      const double co = std::cos(k * t), si = std::sin(k * t);
      v += ck * co + sk * si;
      d1 += k * (sk * co - ck * si);
      d2 -= double(k) * k * (ck * co + sk * si);
    }
  }
  double value(double t) const {
    double v, d1, d2;
    eval(t, v, d1, d2);
    return v;
  }
};

// 20-point Gauss-Legendre panels of width <= 0.2 on [a, b].
template <class F>
double panel_integral(double a, double b, const F& f) {
  static const auto rule = [] {
    std::pair<std::vector<double>, std::vector<double>> r;
    gauss_legendre(20, r.first, r.second);
    return r;
  }();
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 0.2)));
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t q = 0; q < rule.first.size(); ++q) s += 0.5 * h * rule.second[q] * f(lo + 0.5 * h * (rule.first[q] + 1.0));
  }
  return s;
}

bool all_zero(std::span<const double> c) {
  return std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; });
}

double weight_factor(GreenWeight w, double grad) {
  return w == GreenWeight::One ? 1.0 : std::sqrt(1.0 + grad * grad);
}

NodalSet extract_circle(const NodalWorkspace& ws, std::span<const double> c) {
  NodalSet s;
  s.dim = 1;
  s.refinement = ws.refinement();
  const auto& lat = ws.lattice();
  const auto v = ws.contour_evaluator().synthesize(c);
  const auto d = ws.contour_evaluator().synthesize(c, Derivative::DTheta);
  for (double x : d) s.gradient_sup = std::max(s.gradient_sup, std::abs(x));
  const CircleSeries series{ws.basis(), c};
  const std::size_t m = v.size();
  const double h = 2.0 * kPi / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double a = v[j], b = v[(j + 1) % m];
    double root;
    if (a == 0.0) {
      root = lat.longitudes[j];
    } else if ((a < 0.0) != (b < 0.0) && b != 0.0) {
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(
          [&](double t) { return series.value(t); }, lat.longitudes[j], lat.longitudes[j] + h, a, b,
          [](double lo, double hi) { return hi - lo <= 1e-13; }, iters);
      root = 0.5 * (r.first + r.second);
    } else {
      continue;
    }
    if (root >= 2.0 * kPi) root -= 2.0 * kPi;
    double val, d1, d2;
    series.eval(root, val, d1, d2);
    s.zeros.push_back({root, std::abs(d1)});
  }
  std::sort(s.zeros.begin(), s.zeros.end(), [](const NodalZero& x, const NodalZero& y) { return x.theta < y.theta; });
  s.measure = static_cast<double>(s.zeros.size());
  if (!s.zeros.empty()) {
    s.min_gradient = std::numeric_limits<double>::infinity();
    for (const auto& z : s.zeros) s.min_gradient = std::min(s.min_gradient, z.gradient);
    s.regular = s.min_gradient >= 1e-6 * s.gradient_sup;
  }
  return s;
}

NodalSet extract_sphere(const NodalWorkspace& ws, std::span<const double> c) {
  NodalSet s;
  s.dim = 2;
  s.refinement = ws.refinement();
  const auto& lat = ws.lattice();
  const std::size_t nlat = lat.num_lat(), nlon = lat.num_lon();
  const auto& ev = ws.contour_evaluator();
  const auto v = ev.synthesize(c);
  const auto dt = ev.synthesize(c, Derivative::DTheta);
  const auto dp = ev.synthesize(c, Derivative::DPhiOverSin);
  std::vector<double> g(v.size());
  for (std::size_t q = 0; q < v.size(); ++q) g[q] = std::hypot(dt[q], dp[q]);
  // Pole rows carry no usable spherical-coordinate gradient: take the adjacent row.
  for (std::size_t j = 0; j < nlon; ++j) {
    g[j] = g[nlon + j];
    g[(nlat - 1) * nlon + j] = g[(nlat - 2) * nlon + j];
  }
  for (double x : g) s.gradient_sup = std::max(s.gradient_sup, x);

  struct Point {
    double colat, lon, grad;
  };
  auto node = [&](std::size_t i, std::size_t j) { return i * nlon + (j % nlon); };
  auto lon_of = [&](std::size_t j) { return j == nlon ? 2.0 * kPi : lat.longitudes[j]; };
  auto cross = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    const std::size_t p = node(i0, j0), q = node(i1, j1);
    const double t = v[p] / (v[p] - v[q]);
    return Point{lat.colatitudes[i0] + t * (lat.colatitudes[i1] - lat.colatitudes[i0]),
                 lon_of(j0) + t * (lon_of(j1) - lon_of(j0)), g[p] + t * (g[q] - g[p])};
  };
  auto add = [&](const Point& a, const Point& b) {
    NodalSegment seg{a.colat, a.lon, b.colat, b.lon, great_circle_distance(a.colat, a.lon, b.colat, b.lon), a.grad, b.grad};
    s.measure += seg.length;
    s.segments.push_back(seg);
  };
  for (std::size_t i = 0; i + 1 < nlat; ++i)
    for (std::size_t j = 0; j < nlon; ++j) {
      const double v00 = v[node(i, j)], v01 = v[node(i, j + 1)], v11 = v[node(i + 1, j + 1)], v10 = v[node(i + 1, j)];
      const bool p00 = v00 >= 0, p01 = v01 >= 0, p11 = v11 >= 0, p10 = v10 >= 0;
      const bool c0 = p00 != p01, c1 = p01 != p11, c2 = p10 != p11, c3 = p00 != p10;
      const int count = c0 + c1 + c2 + c3;
      if (count == 0) continue;
      auto edge = [&](int e) {
        switch (e) {
          case 0: return cross(i, j, i, j + 1);
          case 1: return cross(i, j + 1, i + 1, j + 1);
          case 2: return cross(i + 1, j, i + 1, j + 1);
          default: return cross(i, j, i + 1, j);
        }
      };
      if (count == 2) {
        int e[2], k = 0;
        const bool cs[4] = {c0, c1, c2, c3};
        for (int t = 0; t < 4; ++t)
          if (cs[t]) e[k++] = t;
        add(edge(e[0]), edge(e[1]));
      } else {
        const bool centre = 0.25 * (v00 + v01 + v11 + v10) >= 0;
        if (centre == p00) {
          add(edge(0), edge(1));
          add(edge(2), edge(3));
        } else {
          add(edge(0), edge(3));
          add(edge(1), edge(2));
        }
      }
    }
  if (!s.segments.empty()) {
    s.min_gradient = std::numeric_limits<double>::infinity();
    for (const auto& seg : s.segments) s.min_gradient = std::min({s.min_gradient, seg.grad_a, seg.grad_b});
    s.regular = s.min_gradient >= 1e-6 * s.gradient_sup;
  }
  return s;
}

}  // namespace

NodalWorkspace::NodalWorkspace(std::shared_ptr<const HarmonicBasis> basis, int refinement)
    : basis_(std::move(basis)),
      refinement_(refinement),
      contour_(basis_->make_evaluator(contour_lattice(*basis_, refinement), true)),
      mask_grid_(mask_grid_for(*basis_, refinement)),
      mask_(basis_->make_evaluator(mask_grid_.lattice(), true)) {}

NodalSet extract_nodal_set(const NodalWorkspace& ws, std::span<const double> coefficients) {
  if (coefficients.size() != ws.basis().size()) throw std::invalid_argument("extract_nodal_set: length mismatch");
  if (all_zero(coefficients)) throw std::invalid_argument("extract_nodal_set: e is identically zero");
  return ws.basis().dim() == 1 ? extract_circle(ws, coefficients) : extract_sphere(ws, coefficients);
}

NodalSet extract_nodal_set(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                           int refinement) {
  return extract_nodal_set(NodalWorkspace(std::move(basis), refinement), coefficients);
}

double nodal_refinement_change(std::shared_ptr<const HarmonicBasis> basis, std::span<const double> coefficients,
                               int refinement) {
  const double a = extract_nodal_set(basis, coefficients, refinement).measure;
  const double b = extract_nodal_set(basis, coefficients, 2 * refinement).measure;
  if (b == 0.0) return a == 0.0 ? 0.0 : 1.0;
  return std::abs(b - a) / b;
}

ExponentFit nodal_measure_exponent(const std::vector<std::pair<double, double>>& lambda_measure, double lo, double hi) {
  return fit_exponent(lambda_measure, lo, hi);
}

double GreenPair::relative_residual() const { return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0); }

namespace {

// Values of div(f grad e) on the mask grid of S^2.
std::vector<double> sphere_divergence(const NodalWorkspace& ws, std::span<const double> c, GreenWeight weight) {
  const auto& b = ws.basis();
  std::vector<double> lap(c.begin(), c.end());
  for (std::size_t i = 0; i < lap.size(); ++i) lap[i] *= -b.laplace_eigenvalue(i);
  const auto& ev = ws.mask_evaluator();
  auto div = ev.synthesize(lap);
  if (weight == GreenWeight::One) return div;
  // div(f grad e) = f lap e + grad g . grad e / (2 f), g = |grad e|^2 of degree <= 2K.
  const int K2 = 2 * b.max_degree();
  const HarmonicBasis fine(2, K2, make_sphere_grid_for_degree(2 * K2));
  const Evaluator on_fine = b.make_evaluator(fine.grid().lattice(), true);
  const auto ft = on_fine.synthesize(c, Derivative::DTheta), fp = on_fine.synthesize(c, Derivative::DPhiOverSin);
  std::vector<double> gvals(ft.size());
  for (std::size_t q = 0; q < gvals.size(); ++q) gvals[q] = ft[q] * ft[q] + fp[q] * fp[q];
  const auto gc = fine.analyze(gvals);
  const Evaluator gev = fine.make_evaluator(ws.mask_grid().lattice(), true);
  const auto gt = gev.synthesize(gc, Derivative::DTheta), gp = gev.synthesize(gc, Derivative::DPhiOverSin);
  const auto et = ev.synthesize(c, Derivative::DTheta), ep = ev.synthesize(c, Derivative::DPhiOverSin);
  for (std::size_t q = 0; q < div.size(); ++q) {
    const double f = std::sqrt(1.0 + et[q] * et[q] + ep[q] * ep[q]);
    div[q] = f * div[q] + (gt[q] * et[q] + gp[q] * ep[q]) / (2.0 * f);
  }
  return div;
}

template <class F>
double over_circle_domains(const NodalSet& nodal, const CircleSeries& series, const F& integrand) {
  // Sum over nodal intervals of -sign(e) * int integrand.
  double s = 0.0;
  const std::size_t m = nodal.zeros.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double a = nodal.zeros[i].theta;
    const double b = i + 1 < m ? nodal.zeros[i + 1].theta : nodal.zeros[0].theta + 2.0 * kPi;
    const double sign = series.value(0.5 * (a + b)) >= 0.0 ? 1.0 : -1.0;
    s -= sign * panel_integral(a, b, integrand);
  }
  return s;
}

}  // namespace

GreenPair gauss_green_residual(const NodalWorkspace& ws, std::span<const double> c, const NodalSet& nodal,
                               GreenWeight weight) {
  if (!nodal.regular) throw std::domain_error("gauss_green_residual: zero is not a regular value at this resolution");
  GreenPair out;
  const auto& b = ws.basis();
  if (b.dim() == 1) {
    const CircleSeries series{b, c};
    for (const auto& z : nodal.zeros) out.lhs += 2.0 * weight_factor(weight, z.gradient) * z.gradient;
    auto div = [&](double t) {
      double v, d1, d2;
      series.eval(t, v, d1, d2);
      if (weight == GreenWeight::One) return d2;
      const double f = std::sqrt(1.0 + d1 * d1);
      return f * d2 + d1 * d1 * d2 / f;
    };
    if (nodal.zeros.empty()) {
      const double sign = series.value(0.0) >= 0.0 ? 1.0 : -1.0;
      out.rhs = -sign * panel_integral(0.0, 2.0 * kPi, div);
    } else {
      out.rhs = over_circle_domains(nodal, series, div);
    }
    return out;
  }
  for (const auto& seg : nodal.segments)
    out.lhs += seg.length * (weight_factor(weight, seg.grad_a) * seg.grad_a + weight_factor(weight, seg.grad_b) * seg.grad_b);
  const auto div = sphere_divergence(ws, c, weight);
  const auto v = ws.mask_evaluator().synthesize(c);
  const auto w = ws.mask_grid().weights();
  for (std::size_t q = 0; q < v.size(); ++q)
    if (v[q] != 0.0) out.rhs -= (v[q] > 0.0 ? 1.0 : -1.0) * w[q] * div[q];
  return out;
}

double nodal_l1_norm(const NodalWorkspace& ws, std::span<const double> c, const NodalSet& nodal) {
  const auto& b = ws.basis();
  if (b.dim() == 1) {
    const CircleSeries series{b, c};
    auto e = [&](double t) { return series.value(t); };
    if (nodal.zeros.empty()) return std::abs(panel_integral(0.0, 2.0 * kPi, e));
    return -over_circle_domains(nodal, series, e);
  }
  return lp_norm(ws.mask_evaluator().synthesize(c), ws.mask_grid(), 1.0);
}

NodalGradientBound nodal_gradient_bound(const NodalWorkspace& ws, std::span<const double> c, double lambda, const NodalSet& nodal) {
  if (!nodal.regular) throw std::domain_error("nodal_gradient_bound: non-regular nodal set");
  NodalGradientBound out;
  if (nodal.dim == 1)
    for (const auto& z : nodal.zeros) out.nodal_gradient_integral += z.gradient;
  else
    for (const auto& seg : nodal.segments) out.nodal_gradient_integral += 0.5 * seg.length * (seg.grad_a + seg.grad_b);
  out.bound = 0.25 * lambda * lambda * nodal_l1_norm(ws, c, nodal);
  return out;
}

NodalGradientSqBound nodal_gradient_sq_bound(std::span<const double> c, double lambda, const NodalSet& nodal) {
  if (!nodal.regular) throw std::domain_error("nodal_gradient_sq_bound: non-regular nodal set");
  NodalGradientSqBound out;
  if (nodal.dim == 1)
    for (const auto& z : nodal.zeros) out.nodal_gradient_sq_integral += z.gradient * z.gradient;
  else
    for (const auto& seg : nodal.segments)
      out.nodal_gradient_sq_integral += 0.5 * seg.length * (seg.grad_a * seg.grad_a + seg.grad_b * seg.grad_b);
  out.bound = std::pow(std::abs(lambda), 3) * euclidean_norm(c);
  out.ratio = out.bound == 0.0 ? 0.0 : out.nodal_gradient_sq_integral / out.bound;
  return out;
}

}  // namespace steklov
