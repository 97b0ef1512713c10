#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steklov {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Experiment settings. Text form (a TOML subset):
///
///   seed = 12345
///   out = "results"
///   [domain]     dim = 1, max_degree = 128
///   [potential]  spec = "cos-lowfreq"
///   [norms]      p = [2, 4, 6, inf], grid_factor = 2
///   [heat]       alpha = [0.5, 1.0, 1.5], t_min_exp = 7, t_max_exp = 3   (t = 2^-j)
///   [fit]        lambda_min = 8, lambda_max = 128
///   [nodal]      refinement = 8
///
/// one key per line; unknown tables or keys are rejected.
struct ExperimentConfig {
  int dim = 1;
  int max_degree = 128;
  std::string potential = "cos-lowfreq";
  std::vector<double> p_list{2, 4, 6, std::numeric_limits<double>::infinity()};
  int grid_factor = 2;
  std::vector<double> alpha_list{0.5, 1.0, 1.5};
  int t_min_exp = 7;
  int t_max_exp = 3;
  double lambda_min = 8;
  double lambda_max = 128;
  int nodal_refinement = 8;
  std::string out_dir = "results";
  std::uint64_t seed = 12345;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  std::string serialize() const;
  /// Throws ConfigError when a field is out of range.
  void validate() const;
  /// FNV-1a 64 of serialize().
  std::uint64_t hash() const;
  std::string hash_hex() const;
  /// t = 2^-t_max_exp, ..., 2^-t_min_exp in increasing order.
  std::vector<double> t_grid() const;
};

enum class CheckStatus { Pass, Fail, ReportOnly, Error, Skipped };
std::string to_string(CheckStatus s);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CheckResult {
  std::string id;
  int criterion = 0;  // 0 for report-only extras
  std::string description;
  CheckStatus status = CheckStatus::Skipped;
  std::vector<std::pair<std::string, double>> measured;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<std::string> notes;
  CsvTable table;
  double runtime_s = 0.0;
  std::string error;

  void measure(const std::string& key, double value) { measured.emplace_back(key, value); }
  void tolerance(const std::string& key, double value) { tolerances.emplace_back(key, value); }
};

struct CheckSpec {
  std::string id;
  int criterion = 0;
  int dim = 1;
  int min_degree = 0;  // config max_degree must reach this
  std::string description;
  std::function<void(const ExperimentConfig&, CheckResult&)> run;
};

const std::vector<CheckSpec>& check_registry();

/// Runs one check; exceptions become CheckStatus::Error.
CheckResult run_check(const CheckSpec& spec, const ExperimentConfig& config);

struct VerificationReport {
  ExperimentConfig config;
  std::vector<CheckResult> results;
  /// Every registry id appears exactly once.
  bool complete() const;
};

/// Runs the checks for config.dim (all dimensions when all_dims is set); others are Skipped.
VerificationReport run_suite(const ExperimentConfig& config, bool all_dims = false,
                             const std::function<void(const CheckResult&)>& progress = {});

/// <dir>/<id>.csv, manifest.json, summary.txt (timings go to timings.txt).
void write_report(const VerificationReport& report, const std::filesystem::path& dir);

std::string summary_text(const VerificationReport& report);

}  // namespace steklov
