#include "ddsim/cli/figures.hpp"

#include "ddsim/cli/output.hpp"

namespace ddsim::cli {

std::vector<FigureSpec> figure_specs(bool fixed_plate_count) {
  const std::vector<long long> budget_500{20, 40, 100, 200, 400, 800};
  std::vector<long long> budget_1km = budget_500;
  if (!fixed_plate_count) {
    for (auto& n : budget_1km) n *= 2;
  }
  return {
      {"fig3", 500.0, 0.0, budget_500},
      {"fig4", 500.0, 0.005, budget_500},
      {"fig5", 500.0, 0.01, budget_500},
      {"fig6", 1000.0, 0.005, budget_1km},
  };
}

std::vector<SimConfig> figure_configs(const FigureSpec& spec, const SimConfig& base) {
  std::vector<SimConfig> configs;
  for (const auto kind : {SequenceKind::kCpmg, SequenceKind::kKdd}) {
    for (const auto pulses : spec.plate_counts) {
      SimConfig c = base;
      c.fiber_length_m = spec.length_m;
      c.error_model.sigma_fraction = spec.error_sigma;
      c.schedule.kind = kind;
      c.schedule.pulses = pulses;
      c.record_trajectory = pulses == spec.plate_counts.back();
      c.validate();
      configs.push_back(std::move(c));
    }
  }
  return configs;
}

std::vector<std::filesystem::path> reproduce_figures(const SimConfig& base,
                                                     const std::filesystem::path& out_dir,
                                                     bool fixed_plate_count) {
  std::vector<std::filesystem::path> written;
  for (const auto& spec : figure_specs(fixed_plate_count)) {
    const auto configs = figure_configs(spec, base);
    const auto results = sweep(configs);
    const auto paths = emit_results(results, out_dir, spec.name);
    written.insert(written.end(), paths.begin(), paths.end());
  }
  return written;
}

}  // namespace ddsim::cli
