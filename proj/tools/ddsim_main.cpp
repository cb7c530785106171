// ddsim: run DD fidelity ensembles and write CSV tables plus a manifest.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ddsim/cli/config.hpp"
#include "ddsim/cli/figures.hpp"
#include "ddsim/cli/manifest.hpp"
#include "ddsim/cli/output.hpp"
#include "ddsim/engine.hpp"
#include "ddsim/errors.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

std::string dump_text(const ddsim::TrialRealization& r, bool profile) {
  std::ostringstream out;
  if (profile) {
    ddsim::write_profile(out, r.profile);
  } else {
    ddsim::write_schedule(out, r.schedule);
  }
  return out.str();
}

void print_summary(const std::vector<ddsim::SimResult>& results) {
  for (const auto& r : results) {
    for (const auto& s : r.states) {
      std::printf("%-4s L=%gm pulses=%lld sigma=%g %s: F=%.6f +- %.6f\n",
                  std::string(ddsim::to_string(r.config.schedule.kind)).c_str(),
                  r.config.fiber_length_m, r.config.schedule.pulses,
                  r.config.error_model.sigma_fraction, s.label.c_str(), s.fidelity_mean,
                  s.fidelity_stderr);
    }
  }
}

int run(const std::vector<std::string>& args) {
  const char* env_seed = std::getenv("DDSIM_SEED");
  auto request = ddsim::cli::parse_config(
      args, env_seed ? std::optional<std::string>(env_seed) : std::nullopt);
  if (request.show_help) {
    std::cout << request.help_text;
    return 0;
  }

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::filesystem::path> written;

  const auto& first = request.configs.front();
  if (request.dump_profile || request.dump_schedule) {
    const auto realization = ddsim::realize_trial(first, 0);
    if (request.dump_profile) {
      ddsim::cli::write_text_file(*request.dump_profile, dump_text(realization, true));
      written.push_back(*request.dump_profile);
    }
    if (request.dump_schedule) {
      ddsim::cli::write_text_file(*request.dump_schedule, dump_text(realization, false));
      written.push_back(*request.dump_schedule);
    }
  }

  if (request.reproduce_figures) {
    const auto paths =
        ddsim::cli::reproduce_figures(first, request.out_dir, request.fixed_plate_count);
    written.insert(written.end(), paths.begin(), paths.end());
    for (const auto& p : paths) std::printf("wrote %s\n", p.string().c_str());
  } else {
    const auto results = ddsim::sweep(request.configs);
    print_summary(results);
    const auto paths = ddsim::cli::emit_results(results, request.out_dir);
    written.insert(written.end(), paths.begin(), paths.end());
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto manifest = ddsim::cli::build_manifest(request.config_source, request.command,
                                                   written, request.out_dir, seconds);
  const auto manifest_path = request.out_dir / "manifest.json";
  ddsim::cli::write_manifest(manifest, manifest_path);
  std::printf("manifest: %s (%.1f s)\n", manifest_path.string().c_str(), seconds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const ddsim::UsageError& e) {
    std::fprintf(stderr, "ddsim: usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const ddsim::IoError& e) {
    std::fprintf(stderr, "ddsim: I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ddsim: %s\n", e.what());
    return kExitInternal;
  }
}
