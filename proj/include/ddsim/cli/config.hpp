#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddsim/engine.hpp"

namespace ddsim::cli {

// Everything one invocation asks for.
struct RunRequest {
  std::vector<SimConfig> configs;  // cartesian product of list-valued keys
  std::filesystem::path out_dir = "ddsim_out";
  std::string config_source = "flags";
  bool reproduce_figures = false;
  bool fixed_plate_count = false;
  std::optional<std::filesystem::path> dump_profile;
  std::optional<std::filesystem::path> dump_schedule;
  std::vector<std::string> command;

  bool show_help = false;
  std::string help_text;
};

/// Settings are layered lowest to highest: built-in defaults, the
/// DDSIM_SEED environment value, the --config file, command-line flags.
/// Throws UsageError naming the offending key.
RunRequest parse_config(std::span<const std::string> args,
                        std::optional<std::string> env_seed = std::nullopt);

/// Flat "key=value" lines; '#' starts a comment. Keys are the long flag
/// names without the leading dashes.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
std::map<std::string, std::string> parse_config_text(std::string_view text,
                                                     const std::string& source_name);

/// H, V, D, A, R, L, or "custom:<alpha_re>:<alpha_im>:<beta_re>:<beta_im>"
/// (normalized on parse).
NamedState parse_state(std::string_view token);

}  // namespace ddsim::cli
