#pragma once

// Line-oriented scenario configuration: `key = value` entries grouped
// under [section] headers, '#' comments. Unknown sections or keys are
// hard errors carrying the offending line. parse(serialize(c)) is the
// identity on normalized configs.
//
// Schema (defaults in parentheses):
//   [model]    variant (0) | cn (0.166666..) | ex (1) | pi (0.1227)
//              sigma (8*pi for model 1, otherwise absent) | pe_phi (1) | pe_psi (1)
//   [grid]     order (128) | quadrature (2*(order+1)) | filter_cutoff (0.25)
//              filter_order (12) | filter_strength (36)
//   [time]     t_start (0) | t_end (1) | dt_initial (1e-8) | dt_min (1e-12)
//              dt_max ((t_end-t_start)/10) | rtol (1e-6) | atol (1e-8)
//   [initial]  phi (tanh) : "tanh" | "coeffs:c0,c1,..."
//              psi (uniform:0.01) : "uniform:v" | "isotherm:psi_b" | "coeffs:..."
//   [advection] u (0)
//   [output]   cadence (1) | snapshot_times (empty, space separated)

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chsurf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  // [model]
  int variant = 0;
  double cn = 1.0 / 6.0;
  double ex = 1.0;
  double pi = 0.1227;
  double sigma = std::numeric_limits<double>::quiet_NaN();  // model 1 only
  double pe_phi = 1.0;
  double pe_psi = 1.0;
  // [grid]
  int order = 128;
  int quadrature = 0;  // 0 means 2*(order+1)
  double filter_cutoff = 0.25;
  int filter_order = 12;
  double filter_strength = 36.0;
  // [time]
  double t_start = 0.0;
  double t_end = 1.0;
  double dt_initial = 1e-8;
  double dt_min = 1e-12;
  double dt_max = 0.0;  // 0 means (t_end - t_start)/10
  double rtol = 1e-6;
  double atol = 1e-8;
  // [initial]
  std::string phi_init = "tanh";
  std::string psi_init = "uniform:0.01";
  // [advection]
  double u = 0.0;
  // [output]
  int cadence = 1;
  std::vector<double> snapshot_times;

  int quadrature_points() const {
    return quadrature > 0 ? quadrature : 2 * (order + 1);
  }
  double dt_max_effective() const {
    return dt_max > 0.0 ? dt_max : (t_end - t_start) / 10.0;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) +
                      ": expected a number, got '" + v + "'");
  }
}

inline int parse_int(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) +
                      ": expected an integer, got '" + v + "'");
  }
}

}  // namespace detail

inline void validate_config(const ScenarioConfig& cfg);

inline ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig cfg;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("line " + std::to_string(line) +
                          ": malformed section header '" + raw + "'");
      section = detail::trim(s.substr(1, s.size() - 2));
      if (section != "model" && section != "grid" && section != "time" &&
          section != "initial" && section != "advection" &&
          section != "output")
        throw ConfigError("line " + std::to_string(line) +
                          ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) +
                        ": expected key = value, got '" + raw + "'");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string value = detail::trim(s.substr(eq + 1));
    auto unknown = [&]() -> ConfigError {
      return ConfigError("line " + std::to_string(line) + ": unknown key '" +
                         key + "' in section [" + section + "]");
    };
    if (section == "model") {
      if (key == "variant") cfg.variant = detail::parse_int(value, line);
      else if (key == "cn") cfg.cn = detail::parse_double(value, line);
      else if (key == "ex") cfg.ex = detail::parse_double(value, line);
      else if (key == "pi") cfg.pi = detail::parse_double(value, line);
      else if (key == "sigma") cfg.sigma = detail::parse_double(value, line);
      else if (key == "pe_phi") cfg.pe_phi = detail::parse_double(value, line);
      else if (key == "pe_psi") cfg.pe_psi = detail::parse_double(value, line);
      else throw unknown();
    } else if (section == "grid") {
      if (key == "order") cfg.order = detail::parse_int(value, line);
      else if (key == "quadrature") cfg.quadrature = detail::parse_int(value, line);
      else if (key == "filter_cutoff") cfg.filter_cutoff = detail::parse_double(value, line);
      else if (key == "filter_order") cfg.filter_order = detail::parse_int(value, line);
      else if (key == "filter_strength") cfg.filter_strength = detail::parse_double(value, line);
      else throw unknown();
    } else if (section == "time") {
      if (key == "t_start") cfg.t_start = detail::parse_double(value, line);
      else if (key == "t_end") cfg.t_end = detail::parse_double(value, line);
      else if (key == "dt_initial") cfg.dt_initial = detail::parse_double(value, line);
      else if (key == "dt_min") cfg.dt_min = detail::parse_double(value, line);
      else if (key == "dt_max") cfg.dt_max = detail::parse_double(value, line);
      else if (key == "rtol") cfg.rtol = detail::parse_double(value, line);
      else if (key == "atol") cfg.atol = detail::parse_double(value, line);
      else throw unknown();
    } else if (section == "initial") {
      if (key == "phi") cfg.phi_init = value;
      else if (key == "psi") cfg.psi_init = value;
      else throw unknown();
    } else if (section == "advection") {
      if (key == "u") cfg.u = detail::parse_double(value, line);
      else throw unknown();
    } else if (section == "output") {
      if (key == "cadence") cfg.cadence = detail::parse_int(value, line);
      else if (key == "snapshot_times") {
        cfg.snapshot_times.clear();
        std::istringstream ss(value);
        std::string tok;
        while (ss >> tok)
          cfg.snapshot_times.push_back(detail::parse_double(tok, line));
      } else throw unknown();
    } else {
      throw ConfigError("line " + std::to_string(line) +
                        ": key outside any section: '" + raw + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

inline void validate_config(const ScenarioConfig& cfg) {
  if (cfg.variant < 0 || cfg.variant > 3)
    throw ConfigError("variant must be 0..3");
  if (!(cfg.cn > 0) || !(cfg.ex > 0) || !(cfg.pi > 0))
    throw ConfigError("cn, ex, pi must be positive");
  if (!(cfg.pe_phi > 0) || !(cfg.pe_psi > 0))
    throw ConfigError("Peclet numbers must be positive");
  if (!std::isnan(cfg.sigma) && cfg.variant != 1 && cfg.sigma != 0.0)
    throw ConfigError("sigma is only meaningful for model 1");
  if (cfg.order < 1) throw ConfigError("order must be >= 1");
  if (cfg.quadrature != 0 && cfg.quadrature < cfg.order + 1)
    throw ConfigError("quadrature must be >= order+1 (or 0 for the default)");
  if (cfg.filter_cutoff < 0 || cfg.filter_cutoff >= 1)
    throw ConfigError("filter_cutoff must lie in [0,1)");
  if (cfg.filter_order <= 0 || cfg.filter_order % 2 != 0)
    throw ConfigError("filter_order must be a positive even integer");
  if (!(cfg.filter_strength > 0))
    throw ConfigError("filter_strength must be positive");
  if (!(cfg.t_end > cfg.t_start))
    throw ConfigError("t_end must exceed t_start");
  if (!(cfg.dt_initial > 0) || !(cfg.dt_min > 0))
    throw ConfigError("dt_initial and dt_min must be positive");
  if (cfg.dt_max < 0) throw ConfigError("dt_max must be >= 0");
  if (!(cfg.rtol > 0) || !(cfg.atol > 0))
    throw ConfigError("rtol and atol must be positive");
  if (cfg.cadence < 1) throw ConfigError("cadence must be >= 1");
  auto check_init = [](const std::string& spec, bool phi) {
    if (phi && spec == "tanh") return;
    if (!phi && spec.rfind("uniform:", 0) == 0) return;
    if (!phi && spec.rfind("isotherm:", 0) == 0) return;
    if (spec.rfind("coeffs:", 0) == 0) return;
    throw ConfigError(std::string("bad ") + (phi ? "phi" : "psi") +
                      " initial spec '" + spec + "'");
  };
  check_init(cfg.phi_init, true);
  check_init(cfg.psi_init, false);
}

inline ScenarioConfig parse_config(const std::string& text) {
  std::istringstream ss(text);
  return parse_config(ss);
}

inline ScenarioConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

inline std::string serialize_config(const ScenarioConfig& cfg) {
  using detail::format_double;
  std::ostringstream out;
  out << "[model]\n";
  out << "variant = " << cfg.variant << "\n";
  out << "cn = " << format_double(cfg.cn) << "\n";
  out << "ex = " << format_double(cfg.ex) << "\n";
  out << "pi = " << format_double(cfg.pi) << "\n";
  if (!std::isnan(cfg.sigma))
    out << "sigma = " << format_double(cfg.sigma) << "\n";
  out << "pe_phi = " << format_double(cfg.pe_phi) << "\n";
  out << "pe_psi = " << format_double(cfg.pe_psi) << "\n";
  out << "[grid]\n";
  out << "order = " << cfg.order << "\n";
  if (cfg.quadrature > 0) out << "quadrature = " << cfg.quadrature << "\n";
  out << "filter_cutoff = " << format_double(cfg.filter_cutoff) << "\n";
  out << "filter_order = " << cfg.filter_order << "\n";
  out << "filter_strength = " << format_double(cfg.filter_strength) << "\n";
  out << "[time]\n";
  out << "t_start = " << format_double(cfg.t_start) << "\n";
  out << "t_end = " << format_double(cfg.t_end) << "\n";
  out << "dt_initial = " << format_double(cfg.dt_initial) << "\n";
  out << "dt_min = " << format_double(cfg.dt_min) << "\n";
  if (cfg.dt_max > 0) out << "dt_max = " << format_double(cfg.dt_max) << "\n";
  out << "rtol = " << format_double(cfg.rtol) << "\n";
  out << "atol = " << format_double(cfg.atol) << "\n";
  out << "[initial]\n";
  out << "phi = " << cfg.phi_init << "\n";
  out << "psi = " << cfg.psi_init << "\n";
  out << "[advection]\n";
  out << "u = " << format_double(cfg.u) << "\n";
  out << "[output]\n";
  out << "cadence = " << cfg.cadence << "\n";
  if (!cfg.snapshot_times.empty()) {
    out << "snapshot_times =";
    for (double t : cfg.snapshot_times) out << " " << format_double(t);
    out << "\n";
  }
  return out.str();
}

}  // namespace chsurf
