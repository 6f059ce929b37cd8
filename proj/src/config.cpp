#include "optomem/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace optomem {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

IniFile IniFile::parse_string(const std::string& text, const std::string& origin) {
  IniFile ini;
  ini.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw config_error(origin + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (ini.entries_.count(full))
      throw config_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + full + "'");
    ini.entries_[full] = {value, lineno};
    ini.values_[full] = value;
  }
  return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

std::string IniFile::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw config_error(origin_ + ": missing required key '" + key + "'");
  return it->second.value;
}

std::string IniFile::get_string_or(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double IniFile::get_double(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw config_error(origin_ + ": missing required key '" + key + "'");
  const std::string& v = it->second.value;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw config_error(origin_ + ":" + std::to_string(it->second.line) + ": key '" + key +
                       "': cannot parse '" + v + "' as a number");
  return x;
}

double IniFile::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long IniFile::get_integer(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw config_error(origin_ + ": missing required key '" + key + "'");
  const std::string& v = it->second.value;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw config_error(origin_ + ":" + std::to_string(it->second.line) + ": key '" + key +
                       "': cannot parse '" + v + "' as an integer");
  return x;
}

int IniFile::line_of(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

ExperimentConfig experiment_config_from_ini(const IniFile& ini) {
  static const std::set<std::string> known = {
      "system.model",          "system.cavity_length",  "system.membrane_mass",
      "system.mech_freq",      "system.mech_damping",   "system.kappa",
      "system.kappa1",         "system.kappa2",         "system.kappa3",
      "system.coupling",       "system.hopping",        "system.reflectivity",
      "system.temperature",    "system.laser_power",    "system.mode_index",
      "system.detuning",       "system.laser_freq",     "system.cavity_freq",
      "system.max_disorder_fraction",
      "detection.detection_window", "detection.filter_freq",
      "detection.detector_efficiency", "detection.lo_phase", "detection.covariance_mode",
      "disorder.dq1", "disorder.dq2"};
  for (const auto& [k, v] : ini.values()) {
    if (!known.count(k))
      throw config_error("unknown config key '" + k + "' (line " +
                         std::to_string(ini.line_of(k)) + ")");
  }

  ExperimentConfig cfg;
  SystemParams& p = cfg.params;
  p.model = model_from_string(ini.get_string("system.model"));
  p.cavity_length = ini.get_double("system.cavity_length");
  p.membrane_mass = ini.get_double("system.membrane_mass");
  p.mech_freq = ini.get_double("system.mech_freq");
  p.mech_damping = ini.get_double("system.mech_damping");
  if (p.model == Model::TR) {
    p.kappa = ini.get_double("system.kappa");
  } else {
    p.kappa1 = ini.get_double("system.kappa1");
    p.kappa2 = ini.get_double("system.kappa2");
    p.kappa3 = ini.get_double("system.kappa3");
    p.hopping = ini.get_double("system.hopping");
  }
  p.coupling = ini.get_double("system.coupling");
  p.reflectivity = ini.get_double("system.reflectivity");
  p.temperature = ini.get_double("system.temperature");
  p.laser_power = ini.get_double("system.laser_power");
  p.mode_index = ini.get_integer("system.mode_index");
  p.max_disorder_fraction = ini.get_double_or("system.max_disorder_fraction", 0.1);
  if (ini.has("system.cavity_freq")) p.cavity_freq = ini.get_double("system.cavity_freq");
  if (ini.has("system.detuning") && ini.has("system.laser_freq"))
    throw config_error("specify either 'system.detuning' or 'system.laser_freq', not both");
  if (ini.has("system.laser_freq")) {
    // Detuning derived from an absolute laser frequency; documented loss of
    // precision when omega_c and omega_L differ by less than ~10 digits.
    const double wl = ini.get_double("system.laser_freq");
    const double wc = static_cast<double>(p.mode_index) * consts::pi * consts::c_light /
                      p.cavity_length;
    p.detuning = wc - wl;
  } else {
    p.detuning = ini.get_double_or("system.detuning", 0.0);
  }
  p.finalize();

  cfg.detection.detection_window = ini.get_double("detection.detection_window");
  cfg.detection.filter_freq = ini.get_double_or("detection.filter_freq", 0.0);
  cfg.detection.detector_efficiency = ini.get_double_or("detection.detector_efficiency", 1.0);
  cfg.detection.lo_phase = ini.get_double_or("detection.lo_phase", 0.0);
  cfg.detection.mode =
      covariance_mode_from_string(ini.get_string_or("detection.covariance_mode", "verbatim"));
  cfg.detection.validate();

  cfg.disorder.dq1 = ini.get_double_or("disorder.dq1", 0.0);
  cfg.disorder.dq2 = ini.get_double_or("disorder.dq2", 0.0);
  validate_disorder(cfg.params, cfg.disorder);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_config_from_ini(IniFile::parse_file(path));
}

}  // namespace optomem
