#pragma once

#include <optional>
#include <string>

#include "mejpa/config.hpp"

namespace mejpa {

enum class Command { junction, tune, gain, sweep, optimize, noise };

/// Parse a command name ("junction", "tune", ...).
std::optional<Command> command_from_string(const std::string& name);

/// Execute one command against a loaded configuration and write the
/// result table to out_path ("" or "-" writes to stdout). Returns the
/// process exit code: 0 success, 1 configuration error, 2 numerical or
/// model error. Diagnostics go to stderr; this function does not throw.
int run_command(Command cmd, const RunConfig& config, const std::string& out_path,
                std::optional<TableFormat> format_override = std::nullopt,
                std::optional<int> grid_points_override = std::nullopt);

}  // namespace mejpa
