#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ddsim/engine.hpp"

namespace ddsim::cli {

struct FigureSpec {
  std::string name;  // file stem, e.g. "fig4"
  double length_m = 500.0;
  double error_sigma = 0.0;
  std::vector<long long> plate_counts;  // ascending; the last is the full budget
};

// The four canned figures. 1 km uses 1600 plates unless fixed_plate_count.
std::vector<FigureSpec> figure_specs(bool fixed_plate_count);

/// CPMG and KDD over the figure's plate counts. Only the full-budget runs
/// record a trajectory. `base` supplies trials, seed, states, noise model and
/// execution settings.
std::vector<SimConfig> figure_configs(const FigureSpec& spec, const SimConfig& base);

/// Runs every figure and writes <out_dir>/<name>.csv plus trajectory files.
std::vector<std::filesystem::path> reproduce_figures(const SimConfig& base,
                                                     const std::filesystem::path& out_dir,
                                                     bool fixed_plate_count);

}  // namespace ddsim::cli
