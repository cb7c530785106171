#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ddsim/engine.hpp"

namespace ddsim::cli {

inline constexpr const char* kResultsHeader =
    "sequence,length_m,pulses,error_sigma,state,trials,seed,fidelity_mean,fidelity_stderr";

// One row per (config, state), header first, '\n' line endings.
std::string format_results_csv(std::span<const SimResult> results);

// "position_m,fidelity" rows for one input state of a trajectory run.
std::string format_trajectory_csv(const SimResult& result, std::size_t state_index);

// Deterministic trajectory file name for (config, state).
std::string trajectory_file_name(const std::string& stem, const SimResult& result,
                                 std::size_t state_index);

// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Writes <out_dir>/<stem>.csv plus one trajectory file per (config, state)
/// for results recorded with a trajectory. Returns the written paths.
/// Throws UsageError on empty input and IoError naming an unwritable path.
std::vector<std::filesystem::path> emit_results(std::span<const SimResult> results,
                                                const std::filesystem::path& out_dir,
                                                const std::string& stem = "results");

}  // namespace ddsim::cli
