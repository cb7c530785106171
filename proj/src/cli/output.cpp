#include "ddsim/cli/output.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

#include "ddsim/errors.hpp"

namespace ddsim::cli {

namespace {

std::string general(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fixed9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

// File-name-safe rendering of a number.
std::string token(double v) {
  std::string s = general(v);
  for (auto& ch : s) {
    if (ch == '.') ch = 'p';
    if (ch == '-') ch = 'm';
    if (ch == '+') ch = '_';
  }
  return s;
}

}  // namespace

std::string format_results_csv(std::span<const SimResult> results) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const auto& r : results) {
    const auto& c = r.config;
    for (const auto& s : r.states) {
      out += std::string(to_string(c.schedule.kind));
      out += ',' + general(c.fiber_length_m);
      out += ',' + std::to_string(c.schedule.pulses);
      out += ',' + general(c.error_model.sigma_fraction);
      out += ',' + s.label;
      out += ',' + std::to_string(c.trials);
      out += ',' + std::to_string(c.master_seed);
      out += ',' + fixed9(s.fidelity_mean);
      out += ',' + fixed9(s.fidelity_stderr);
      out += '\n';
    }
  }
  return out;
}

std::string format_trajectory_csv(const SimResult& result, std::size_t state_index) {
  const auto& traj = result.states.at(state_index).trajectory_fidelity;
  if (traj.size() != result.trajectory_positions_m.size()) {
    throw InternalError("trajectory samples and positions disagree");
  }
  std::string out = "position_m,fidelity\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out += general(result.trajectory_positions_m[i]) + ',' + fixed9(traj[i]) + '\n';
  }
  return out;
}

std::string trajectory_file_name(const std::string& stem, const SimResult& result,
                                 std::size_t state_index) {
  const auto& c = result.config;
  std::string label = result.states.at(state_index).label;
  for (auto& ch : label) {
    if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
  }
  return stem + "_trajectory_" + std::string(to_string(c.schedule.kind)) + "_" +
         token(c.fiber_length_m) + "m_" + std::to_string(c.schedule.pulses) + "p_err" +
         token(c.error_model.sigma_fraction) + "_" + label + ".csv";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string(), "cannot create directory: " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError(path.string(), "write failed");
}

std::vector<std::filesystem::path> emit_results(std::span<const SimResult> results,
                                                const std::filesystem::path& out_dir,
                                                const std::string& stem) {
  if (results.empty()) throw UsageError("emit_results: no results");
  std::vector<std::filesystem::path> written;
  const auto table = out_dir / (stem + ".csv");
  write_text_file(table, format_results_csv(results));
  written.push_back(table);
  for (const auto& r : results) {
    if (!r.config.record_trajectory) continue;
    for (std::size_t s = 0; s < r.states.size(); ++s) {
      const auto path = out_dir / trajectory_file_name(stem, r, s);
      write_text_file(path, format_trajectory_csv(r, s));
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace ddsim::cli
