#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "rdblow/bounds.hpp"
#include "rdblow/config.hpp"
#include "rdblow/functionals.hpp"
#include "rdblow/hypotheses.hpp"
#include "rdblow/solver.hpp"

namespace rdblow {

using json = nlohmann::ordered_json;

json to_json(const HypothesisReport& report);
json to_json(const UpperBoundResult& result);
json to_json(const LowerBoundResult& result);
json to_json(const MonitorReport& report);
json to_json(const ExperimentConfig& config);

/// Outcome block of a run; the samples go to the CSV trace instead.
json to_json(const SolveTrace& trace);

/// Structured refusal: error code, message and, for hypothesis failures,
/// the failing report with its witness.
json error_json(const std::exception& e);

/// Columns t, E, J, scriptE, grad_u_energy, grad_v_energy, bdry_u, bdry_v,
/// intF, sup_u, sup_v, dt. Missing values are written as nan.
std::string trace_csv(std::span<const EnergySample> samples);

/// Same columns, whitespace separated, with a commented header.
std::string plot_dat(std::span<const EnergySample> samples);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace rdblow
