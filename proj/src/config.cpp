#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "steklov/potential.hpp"
#include "steklov/verify.hpp"

namespace steklov {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// strips a trailing comment, ignoring '#' inside a quoted string
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s.empty()) fail(line, "empty value");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(line, "not a number: " + s);
  }
  if (used != s.size()) fail(line, "not a number: " + s);
  if (std::isnan(v)) fail(line, "nan is not allowed");
  return v;
}

long long parse_integer(const std::string& raw, int line) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    fail(line, "not an integer: " + s);
  }
  if (used != s.size()) fail(line, "not an integer: " + s);
  return v;
}

std::uint64_t parse_unsigned(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.empty() || s[0] == '-') fail(line, "seed must be a non-negative integer");
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    fail(line, "not an integer: " + s);
  }
  if (used != s.size()) fail(line, "not an integer: " + s);
  return v;
}

std::string parse_string(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') fail(line, "expected a quoted string");
  const std::string body = s.substr(1, s.size() - 2);
  if (body.find('"') != std::string::npos || body.find('\\') != std::string::npos)
    fail(line, "escapes are not supported");
  return body;
}

std::vector<double> parse_array(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') fail(line, "expected an array");
  std::vector<double> out;
  std::stringstream ss(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;  // trailing comma
    out.push_back(parse_number(item, line));
  }
  if (out.empty()) fail(line, "empty array");
  return out;
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string fmt_array(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt_double(v[i]);
  }
  return s + "]";
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  std::string table;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::vector<std::string> seen;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "bad table header");
      table = trim(s.substr(1, s.size() - 2));
      if (table != "domain" && table != "potential" && table != "norms" && table != "heat" && table != "fit" &&
          table != "nodal")
        fail(line, "unknown table [" + table + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    const std::string full = table.empty() ? key : table + "." + key;
    for (const auto& k : seen)
      if (k == full) fail(line, "duplicate key " + full);
    seen.push_back(full);

    if (full == "seed") c.seed = parse_unsigned(val, line);
    else if (full == "out") c.out_dir = parse_string(val, line);
    else if (full == "domain.dim") c.dim = static_cast<int>(parse_integer(val, line));
    else if (full == "domain.max_degree") c.max_degree = static_cast<int>(parse_integer(val, line));
    else if (full == "potential.spec") c.potential = parse_string(val, line);
    else if (full == "norms.p") c.p_list = parse_array(val, line);
    else if (full == "norms.grid_factor") c.grid_factor = static_cast<int>(parse_integer(val, line));
    else if (full == "heat.alpha") c.alpha_list = parse_array(val, line);
    else if (full == "heat.t_min_exp") c.t_min_exp = static_cast<int>(parse_integer(val, line));
    else if (full == "heat.t_max_exp") c.t_max_exp = static_cast<int>(parse_integer(val, line));
    else if (full == "fit.lambda_min") c.lambda_min = parse_number(val, line);
    else if (full == "fit.lambda_max") c.lambda_max = parse_number(val, line);
    else if (full == "nodal.refinement") c.nodal_refinement = static_cast<int>(parse_integer(val, line));
    else fail(line, "unknown key " + full);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream o;
  o << "seed = " << seed << "\n";
  o << "out = \"" << out_dir << "\"\n\n";
  o << "[domain]\n";
  o << "dim = " << dim << "\n";
  o << "max_degree = " << max_degree << "\n\n";
  o << "[potential]\n";
  o << "spec = \"" << potential << "\"\n\n";
  o << "[norms]\n";
  o << "p = " << fmt_array(p_list) << "\n";
  o << "grid_factor = " << grid_factor << "\n\n";
  o << "[heat]\n";
  o << "alpha = " << fmt_array(alpha_list) << "\n";
  o << "t_min_exp = " << t_min_exp << "\n";
  o << "t_max_exp = " << t_max_exp << "\n\n";
  o << "[fit]\n";
  o << "lambda_min = " << fmt_double(lambda_min) << "\n";
  o << "lambda_max = " << fmt_double(lambda_max) << "\n\n";
  o << "[nodal]\n";
  o << "refinement = " << nodal_refinement << "\n";
  return o.str();
}

void ExperimentConfig::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
  if (max_degree < 1) throw ConfigError("max_degree must be positive");
  if (grid_factor < 1) throw ConfigError("grid_factor must be positive");
  for (double p : p_list)
    if (!(p >= 2.0)) throw ConfigError("norm exponents must be >= 2");
  for (double a : alpha_list)
    if (!(a > 0.0 && a < 2.0)) throw ConfigError("alpha must lie in (0, 2)");
  if (t_max_exp < 0 || t_min_exp < t_max_exp) throw ConfigError("need 0 <= t_max_exp <= t_min_exp");
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min)) throw ConfigError("need 0 < lambda_min < lambda_max");
  if (nodal_refinement < 4) throw ConfigError("nodal refinement must be at least 4");
  if (out_dir.empty()) throw ConfigError("out must not be empty");
  try {
    PotentialSpec::parse(potential);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad potential spec: ") + e.what());
  }
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string ExperimentConfig::hash_hex() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

std::vector<double> ExperimentConfig::t_grid() const {
  std::vector<double> t;
  for (int j = t_min_exp; j >= t_max_exp; --j) t.push_back(std::ldexp(1.0, -j));
  return t;
}

}  // namespace steklov
