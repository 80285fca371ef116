#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace pas {

using Json = nlohmann::ordered_json;

/// Subcommands shared by the CLI and the C API.
const std::vector<std::string>& command_names();

/// Runs `command` on a JSON config. Unknown keys and malformed values raise
/// ConfigError. The returned text is the complete command output (CSV for
/// air-sweep, line dumps for typ-dump and b-typ, JSON otherwise) and always
/// carries the config it was produced from.
std::string run_command(const std::string& command, const Json& config, int threads = 1);

/// CSV header and row appended by `sim` runs.
std::string sim_csv_header();
std::string sim_csv_row(const Json& stats);

/// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

}  // namespace pas
