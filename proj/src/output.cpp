#include "decosim/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "decosim/errors.hpp"
#include "decosim/version.hpp"

namespace decosim::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, p);
}

std::string csv_header(const RunMeta& meta) {
  std::ostringstream out;
  out << "# " << kToolName << " " << kVersion << "\n";
  out << "# subcommand: " << meta.subcommand << "\n";
  out << "# seed: " << meta.seed << "\n";
  out << "# config:";
  for (const auto& [k, v] : meta.resolved_config) out << " " << k << "=" << v;
  out << "\n";
  return out.str();
}

std::string csv_table(const RunMeta& meta, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  out << csv_header(meta);
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  return out.str();
}

nlohmann::json json_meta(const RunMeta& meta) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["subcommand"] = meta.subcommand;
  j["seed"] = meta.seed;
  j["config"] = meta.resolved_config;
  return j;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file: " + tmp);
    out << content;
    out.flush();
    if (!out) throw ConfigError("failed writing output file: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("failed to move output into place: " + path);
}

}  // namespace decosim::cli
