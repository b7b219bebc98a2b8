#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace decosim::cli {

// Two-column CSV (x, y), '#' comments allowed; used for tabulated spectral
// weights and densities.
std::pair<std::vector<double>, std::vector<double>> read_table_csv(const std::string& path);

// Flat key-value run configuration: `key = value` lines, '#' comments.
// Command-line `--set key=value` entries override file entries. Unknown keys
// are rejected when a subcommand finishes reading its schema.
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text, const std::string& origin = "<string>");

  void set(const std::string& key, const std::string& value);
  void merge_overrides(const std::vector<std::string>& assignments);  // "key=value"

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_double_list(const std::string& key);  // comma separated

  // Throws ConfigError when any key was never consumed by a getter.
  void reject_unknown() const;

  // Deterministic "k=v" listing of everything consumed, for output headers.
  const std::map<std::string, std::string>& resolved() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> consumed_;
};

}  // namespace decosim::cli
