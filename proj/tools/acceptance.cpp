// Runs every registered check with the default configuration and prints one
// PASS/FAIL line per acceptance criterion. Tolerances live in the checks.
//
//   acceptance [--out dir] [--strict]
//
// Exit status: 2 if a check threw, 1 with --strict if any criterion failed, else 0.

#include <cstdio>
#include <map>

#include "CLI11.hpp"
#include "steklov/verify.hpp"

using namespace steklov;

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string out = "acceptance_results";
  bool strict = false;
  app.add_option("--out", out, "report directory");
  app.add_flag("--strict", strict, "non-zero exit when a criterion fails");
  CLI11_PARSE(app, argc, argv);

  ExperimentConfig cfg;
  cfg.out_dir = out;
  const auto rep = run_suite(cfg, true, [](const CheckResult& r) {
    std::fprintf(stderr, "  %-8s %-24s %8.2f s\n", to_string(r.status).c_str(), r.id.c_str(), r.runtime_s);
  });
  write_report(rep, out);

  std::map<int, std::vector<const CheckResult*>> by_criterion;
  for (const auto& r : rep.results)
    if (r.criterion > 0) by_criterion[r.criterion].push_back(&r);

  bool any_fail = false, any_error = false;
  for (int c = 1; c <= 12; ++c) {
    bool pass = by_criterion.count(c) > 0;
    std::string ids;
    for (const auto* r : by_criterion[c]) {
      pass = pass && r->status == CheckStatus::Pass;
      any_error = any_error || r->status == CheckStatus::Error;
      ids += (ids.empty() ? "" : ", ") + r->id + " " + to_string(r->status);
    }
    any_fail = any_fail || !pass;
    std::printf("criterion %2d: %s  (%s)\n", c, pass ? "PASS" : "FAIL", ids.c_str());
  }
  for (const auto& r : rep.results)
    if (r.criterion == 0) std::printf("report      : %-24s %s\n", r.id.c_str(), to_string(r.status).c_str());
  std::printf("details in %s/summary.txt\n", out.c_str());
  if (any_error) return 2;
  return strict && any_fail ? 1 : 0;
}
