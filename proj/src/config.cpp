#include "decosim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "decosim/errors.hpp"

namespace decosim::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file: " + path);
  std::vector<double> x, y;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'x,y'");
    try {
      x.push_back(std::stod(a));
      y.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number");
    }
  }
  return {std::move(x), std::move(y)};
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.set(key, value);
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  consumed_[key] = false;
}

void Config::merge_overrides(const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set expects key=value, got: " + a);
    set(trim(a.substr(0, eq)), trim(a.substr(eq + 1)));
  }
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key: " + key);
  consumed_[key] = true;
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  if (!has(key)) return fallback;
  return get_string(key);
}

double Config::get_double(const std::string& key) {
  const std::string raw = get_string(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not a number: " + raw);
  }
}

double Config::get_double(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return get_double(key);
}

int Config::get_int(const std::string& key, int fallback) {
  if (!has(key)) return fallback;
  const std::string raw = get_string(key);
  int v = 0;
  const auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || p != raw.data() + raw.size())
    throw ConfigError("key '" + key + "': not an integer: " + raw);
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const std::string raw = get_string(key);
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw ConfigError("key '" + key + "': not a boolean: " + raw);
}

std::vector<double> Config::get_double_list(const std::string& key) {
  const std::string raw = get_string(key);
  std::vector<double> out;
  std::istringstream in(raw);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': not a number: " + item);
    }
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

void Config::reject_unknown() const {
  for (const auto& [key, used] : consumed_)
    if (!used) throw ConfigError("unknown key: " + key);
}

}  // namespace decosim::cli
