#include <Eigen/Core>
#include <boost/version.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "steklov/verify.hpp"

namespace steklov {

namespace {
const char* kVersion = "0.1.0";

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// json has no inf/nan; store them as strings
nlohmann::json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}
}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::ReportOnly: return "REPORT";
    case CheckStatus::Error: return "ERROR";
    case CheckStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

CheckResult run_check(const CheckSpec& spec, const ExperimentConfig& config) {
  CheckResult r;
  r.id = spec.id;
  r.criterion = spec.criterion;
  r.description = spec.description;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (config.max_degree < spec.min_degree)
      throw std::invalid_argument("max_degree " + std::to_string(config.max_degree) + " is below the " +
                                  std::to_string(spec.min_degree) + " this check needs");
    spec.run(config, r);
  } catch (const std::exception& e) {
    r.status = CheckStatus::Error;
    r.error = e.what();
  }
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

bool VerificationReport::complete() const {
  std::set<std::string> ids;
  for (const auto& r : results)
    if (!ids.insert(r.id).second) return false;
  for (const auto& s : check_registry())
    if (!ids.count(s.id)) return false;
  return ids.size() == check_registry().size();
}

VerificationReport run_suite(const ExperimentConfig& config, bool all_dims,
                             const std::function<void(const CheckResult&)>& progress) {
  config.validate();
  VerificationReport rep;
  rep.config = config;
  for (const auto& spec : check_registry()) {
    CheckResult r;
    if (all_dims || spec.dim == 0 || spec.dim == config.dim) {
      r = run_check(spec, config);
    } else {
      r.id = spec.id;
      r.criterion = spec.criterion;
      r.description = spec.description;
      r.status = CheckStatus::Skipped;
      r.notes.push_back("needs dim " + std::to_string(spec.dim));
    }
    if (progress) progress(r);
    rep.results.push_back(std::move(r));
  }
  return rep;
}

std::string summary_text(const VerificationReport& report) {
  std::ostringstream o;
  o << "config hash " << report.config.hash_hex() << "\n";
  int counts[5] = {0, 0, 0, 0, 0};
  for (const auto& r : report.results) {
    ++counts[static_cast<int>(r.status)];
    char head[128];
    std::snprintf(head, sizeof head, "%-8s %-24s", to_string(r.status).c_str(), r.id.c_str());
    o << head << " " << r.description << "\n";
    for (const auto& [k, v] : r.measured) o << "           " << k << " = " << num(v) << "\n";
    for (const auto& [k, v] : r.tolerances) o << "           tol " << k << " = " << num(v) << "\n";
    for (const auto& n : r.notes) o << "           note: " << n << "\n";
    if (!r.error.empty()) o << "           error: " << r.error << "\n";
  }
  o << "pass " << counts[0] << ", fail " << counts[1] << ", report " << counts[2] << ", error " << counts[3]
    << ", skipped " << counts[4] << "\n";
  return o.str();
}

void write_report(const VerificationReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string hash = report.config.hash_hex();
  nlohmann::json checks = nlohmann::json::array();
  std::ostringstream timings;
  for (const auto& r : report.results) {
    nlohmann::json j;
    j["id"] = r.id;
    j["criterion"] = r.criterion;
    j["description"] = r.description;
    j["status"] = to_string(r.status);
    nlohmann::json m = nlohmann::json::object(), t = nlohmann::json::object();
    for (const auto& [k, v] : r.measured) m[k] = jnum(v);
    for (const auto& [k, v] : r.tolerances) t[k] = jnum(v);
    j["measured"] = m;
    j["tolerances"] = t;
    j["notes"] = r.notes;
    if (!r.error.empty()) j["error"] = r.error;
    if (!r.table.columns.empty()) {
      j["csv"] = r.id + ".csv";
      std::ofstream f(dir / (r.id + ".csv"));
      f << "# config " << hash << "\n";
      for (std::size_t c = 0; c < r.table.columns.size(); ++c) f << (c ? "," : "") << r.table.columns[c];
      f << "\n";
      for (const auto& row : r.table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) f << (c ? "," : "") << num(row[c]);
        f << "\n";
      }
    }
    checks.push_back(std::move(j));
    char line[96];
    std::snprintf(line, sizeof line, "%-24s %9.3f s\n", r.id.c_str(), r.runtime_s);
    timings << line;
  }
  nlohmann::json manifest;
  manifest["config_hash"] = hash;
  manifest["config"] = report.config.serialize();
  manifest["version"] = kVersion;
  manifest["libraries"] = {
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000)}};
  manifest["checks"] = checks;
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
  std::ofstream(dir / "summary.txt") << summary_text(report);
  std::ofstream(dir / "timings.txt") << timings.str();
}

}  // namespace steklov
