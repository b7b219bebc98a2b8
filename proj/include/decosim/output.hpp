#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace decosim::cli {

// Shortest decimal representation that parses back to the same double
// ("round-trip" formatting); inf/nan print as "inf"/"nan".
std::string format_double(double value);

struct RunMeta {
  std::string subcommand;
  std::map<std::string, std::string> resolved_config;
  std::uint64_t seed = 0;
};

// "# decosim <version>" header block embedding subcommand, resolved config
// and seed. Wall-clock duration goes to stderr, keeping the file
// byte-identical across reruns.
std::string csv_header(const RunMeta& meta);

std::string csv_table(const RunMeta& meta, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);

nlohmann::json json_meta(const RunMeta& meta);

// Write via temp file + rename so readers never observe partial output.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace decosim::cli
