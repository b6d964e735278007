#pragma once

// Plain-text configuration: key = value lines in [grid], [well], [drive] and
// [run] sections. Unknown sections or keys are errors. Comments start with
// ';' or '#' on their own line.

#include "chaotun/model.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace chaotun {

class ConfigParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses configuration text into an unvalidated SimulationConfig; missing keys
/// keep their defaults. `origin` names the source in error messages.
[[nodiscard]] SimulationConfig parse_config(const std::string& text,
                                            const std::string& origin = "<config>");

/// Reads and parses a file; the error names the path when it cannot be opened.
[[nodiscard]] SimulationConfig load_config(const std::filesystem::path& path);

/// Serialises every field with 17 significant digits; parse_config of the
/// result reproduces the config.
[[nodiscard]] std::string format_config(const SimulationConfig& cfg);

} // namespace chaotun
