#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "rdblow/config.hpp"
#include "rdblow/report.hpp"

namespace rdblow {

enum class Command { check, bounds, simulate, sandwich };

std::string_view to_string(Command command);
Command parse_command(std::string_view name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Exit status a library error maps to.
int exit_code_for(ErrorCode code);

struct CommandResult {
  int exit_code = kExitOk;
  json report;
  std::vector<EnergySample> samples;  // empty unless a simulation ran
};

CommandResult cmd_check(const ExperimentConfig& config);
CommandResult cmd_bounds(const ExperimentConfig& config);
CommandResult cmd_simulate(const ExperimentConfig& config);
CommandResult cmd_sandwich(const ExperimentConfig& config);

CommandResult run_command(Command command, const ExperimentConfig& config);

/// Writes report.json, trace.csv and plot.dat as enabled in the outputs
/// block.
void write_outputs(const CommandResult& result, const OutputBlock& outputs,
                   const std::filesystem::path& directory);

}  // namespace rdblow
