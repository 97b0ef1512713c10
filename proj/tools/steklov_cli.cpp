// steklov: command line front end.
//
//   steklov solve   --dim 1 --max-degree 128 --potential cos-lowfreq
//   steklov norms   --dim 2 --max-degree 48 --p 2 --p 4 --p inf
//   steklov nodal   --dim 1 --potential cos-lowfreq
//   steklov heat    --alpha 1 --potential cos-lowfreq
//   steklov verify  --config exp.toml --out results
//   steklov report  --out results

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "steklov/heat.hpp"
#include "steklov/nodal.hpp"
#include "steklov/steklov_solver.hpp"
#include "steklov/verify.hpp"

using namespace steklov;

namespace {

struct Flags {
  std::string config;
  int dim = 0;
  int max_degree = 0;
  std::string potential;
  std::vector<std::string> p;
  std::vector<double> alpha;
  std::int64_t seed = -1;
  std::string out;
  bool all_dims = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "experiment config file");
  app->add_option("--dim", f.dim, "1 (circle) or 2 (sphere)");
  app->add_option("--max-degree", f.max_degree, "truncation degree K");
  app->add_option("--potential", f.potential, "zero | constant:c | cos-lowfreq | random-lipschitz:seed=..,cap=..");
  app->add_option("--p", f.p, "norm exponent (repeatable, 'inf' allowed)");
  app->add_option("--alpha", f.alpha, "heat exponent (repeatable)");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--out", f.out, "output directory");
}

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(f.config);
  if (f.dim) c.dim = f.dim;
  if (f.max_degree) c.max_degree = f.max_degree;
  if (!f.potential.empty()) c.potential = f.potential;
  if (!f.p.empty()) {
    c.p_list.clear();
    for (const auto& s : f.p) c.p_list.push_back(s == "inf" ? kInfinity : std::stod(s));
  }
  if (!f.alpha.empty()) c.alpha_list = f.alpha;
  if (f.seed >= 0) c.seed = static_cast<std::uint64_t>(f.seed);
  if (!f.out.empty()) c.out_dir = f.out;
  c.validate();
  return c;
}

std::shared_ptr<const HarmonicBasis> make_basis(const ExperimentConfig& c) {
  QuadratureGrid g = c.dim == 1 ? make_circle_grid_for_degree(2 * c.max_degree)
                                : make_sphere_grid_for_degree(2 * c.max_degree);
  return std::make_shared<const HarmonicBasis>(c.dim, c.max_degree, std::move(g));
}

std::ofstream open_out(const ExperimentConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  const auto path = std::filesystem::path(c.out_dir) / name;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << "# config " << c.hash_hex() << "\n";
  std::printf("wrote %s\n", path.string().c_str());
  return f;
}

std::string pstr(double p) { return std::isinf(p) ? "inf" : std::to_string(p); }

int cmd_solve(const ExperimentConfig& c) {
  const auto b = make_basis(c);
  const auto sp = solve_spectrum(make_potential(c.dim, PotentialSpec::parse(c.potential)), b);
  auto f = open_out(c, "spectrum.csv");
  f << "index,lambda,residual,truncation_flag\n";
  int flagged = 0;
  for (std::size_t i = 0; i < sp.pairs.size(); ++i) {
    const auto& e = sp.pairs[i];
    flagged += e.truncation_flag;
    f << i << "," << e.lambda << "," << e.residual << "," << e.truncation_flag << "\n";
  }
  std::printf("%zu eigenpairs, lambda in [%.6g, %.6g], %d near the truncation\n", sp.pairs.size(),
              sp.pairs.front().lambda, sp.pairs.back().lambda, flagged);
  return 0;
}

int cmd_norms(const ExperimentConfig& c) {
  const auto b = make_basis(c);
  const auto sp = solve_spectrum(make_potential(c.dim, PotentialSpec::parse(c.potential)), b);
  const auto g = norm_grid(*b, c.grid_factor);
  NormOptions o;
  o.seed = c.seed;
  auto f = open_out(c, "norms.csv");
  f << "p,lambda,measured,model\n";
  for (double p : c.p_list) {
    std::vector<std::pair<double, double>> s;
    for (int k = static_cast<int>(c.lambda_min); k <= std::min<double>(c.lambda_max, c.max_degree - 1); ++k) {
      const auto cp = cluster_projector(sp, k);
      if (cp.empty) continue;
      const auto map = SpectralMap::from_spectrum(sp, cp.members, [](double) { return std::complex<double>(1, 0); });
      s.emplace_back(k, operator_norm_2_to_p(map, *b, p, g, o).value);
    }
    const double sg = sigma(p, c.dim);
    if (s.size() < 4) {
      std::printf("p = %s: too few clusters\n", pstr(p).c_str());
      continue;
    }
    const auto fit = fit_exponent(s);
    for (const auto& [k, v] : s) f << pstr(p) << "," << k << "," << v << "," << std::exp(fit.intercept) * std::pow(k, sg) << "\n";
    std::printf("p = %-4s slope %.4f  predicted %.4f  r2 %.4f\n", pstr(p).c_str(), fit.slope, sg, fit.r_squared);
  }
  return 0;
}

int cmd_nodal(const ExperimentConfig& c) {
  const auto b = make_basis(c);
  const auto sp = solve_spectrum(make_potential(c.dim, PotentialSpec::parse(c.potential)), b);
  NodalWorkspace ws(b, c.nodal_refinement);
  auto f = open_out(c, "nodal.csv");
  f << "lambda,measured,regular\n";
  std::vector<std::pair<double, double>> s;
  for (std::size_t i : sp.window(c.lambda_min, std::min<double>(c.lambda_max, 0.8 * c.max_degree))) {
    const auto ns = extract_nodal_set(ws, sp.pairs[i].coefficients(b->size()));
    f << sp.pairs[i].lambda << "," << ns.measure << "," << ns.regular << "\n";
    if (ns.measure > 0) s.emplace_back(sp.pairs[i].lambda, ns.measure);
  }
  if (s.size() >= 4) std::printf("nodal measure slope %.4f over %zu eigenfunctions\n", nodal_measure_exponent(s).slope, s.size());
  return 0;
}

int cmd_heat(const ExperimentConfig& c) {
  const auto V = make_potential(c.dim, PotentialSpec::parse(c.potential));
  const QuadratureGrid grid = c.dim == 1 ? make_circle_grid(128) : make_sphere_grid(16, 32);
  auto f = open_out(c, "heat.csv");
  f << "alpha,t,inf_ratio,sup_ratio,kato\n";
  for (double a : c.alpha_list) {
    HeatKernelGrid hk;
    hk.alpha = a;
    hk.dim = c.dim;
    hk.grid = grid;
    for (double t : c.t_grid()) {
      hk.times.push_back(t);
      hk.kernels.push_back(base_heat_kernel(a, t, grid.lattice()));
      hk.provenance.emplace_back("base");
    }
    const auto rows = two_sided_bound_report(hk);
    const auto km = kato_modulus(V, a, hk.times, grid.lattice());
    const auto tp = check_3p(a, grid.lattice(), 100000, c.seed);
    std::printf("alpha %.3g: 3P max ratio %.4f\n", a, tp.max_ratio);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      f << a << "," << rows[i].t << "," << rows[i].inf_ratio << "," << rows[i].sup_ratio << "," << km.values[i] << "\n";
      std::printf("  t %-10.6g inf %.4f sup %.4f kato %.4g\n", rows[i].t, rows[i].inf_ratio, rows[i].sup_ratio,
                  km.values[i]);
    }
  }
  return 0;
}

int cmd_verify(const ExperimentConfig& c, bool all_dims) {
  const auto rep = run_suite(c, all_dims, [](const CheckResult& r) {
    std::printf("%-8s %-24s %8.2f s\n", to_string(r.status).c_str(), r.id.c_str(), r.runtime_s);
    std::fflush(stdout);
  });
  write_report(rep, c.out_dir);
  std::printf("report in %s\n", c.out_dir.c_str());
  for (const auto& r : rep.results)
    if (r.status == CheckStatus::Fail || r.status == CheckStatus::Error) return 1;
  return 0;
}

int cmd_report(const std::string& dir) {
  std::ifstream f(std::filesystem::path(dir) / "manifest.json");
  if (!f) throw std::runtime_error("no manifest.json in " + dir);
  const auto m = nlohmann::json::parse(f);
  std::printf("config %s, version %s\n", m["config_hash"].get<std::string>().c_str(),
              m["version"].get<std::string>().c_str());
  for (const auto& ch : m["checks"]) {
    std::printf("%-8s %-24s %s\n", ch["status"].get<std::string>().c_str(), ch["id"].get<std::string>().c_str(),
                ch["description"].get<std::string>().c_str());
    for (const auto& [k, v] : ch["measured"].items()) std::printf("           %s = %s\n", k.c_str(), v.dump().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steklov eigenfunction and heat kernel experiments"};
  app.require_subcommand(1);
  Flags f;
  auto* solve = app.add_subcommand("solve", "spectrum of D + V");
  auto* norms = app.add_subcommand("norms", "cluster projector L^2 -> L^p norms");
  auto* nodal = app.add_subcommand("nodal", "nodal measures of eigenfunctions");
  auto* heat = app.add_subcommand("heat", "heat kernel envelopes, 3P and Kato modulus");
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  auto* report = app.add_subcommand("report", "print a stored report");
  for (auto* s : {solve, norms, nodal, heat, verify}) add_common(s, f);
  verify->add_flag("--all-dims", f.all_dims, "run checks for both dimensions");
  report->add_option("--out", f.out, "report directory")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) return cmd_report(f.out);
    const auto cfg = resolve(f);
    if (solve->parsed()) return cmd_solve(cfg);
    if (norms->parsed()) return cmd_norms(cfg);
    if (nodal->parsed()) return cmd_nodal(cfg);
    if (heat->parsed()) return cmd_heat(cfg);
    if (verify->parsed()) return cmd_verify(cfg, f.all_dims);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
