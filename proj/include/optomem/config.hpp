#pragma once

#include <map>
#include <string>

#include "optomem/params.hpp"

namespace optomem {

/// Minimal sectioned INI reader. Keys keep their section as "section.key";
/// parse errors carry line numbers and key names.
class IniFile {
 public:
  static IniFile parse_file(const std::string& path);
  static IniFile parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long long get_integer(const std::string& key) const;
  int line_of(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::string> values_;
  std::string origin_;
};

/// A fully parsed experiment configuration: [system], [detection], [disorder].
struct ExperimentConfig {
  SystemParams params;
  DetectionSettings detection;
  Disorder disorder;
};

/// Loads and finalizes a configuration; unknown keys and missing required keys
/// raise config_error naming the key.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig experiment_config_from_ini(const IniFile& ini);

}  // namespace optomem
