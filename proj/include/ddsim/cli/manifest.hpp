#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ddsim::cli {

struct ManifestEntry {
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string config_source;
  std::vector<std::string> command;
  std::vector<ManifestEntry> outputs;
  double wall_clock_seconds = 0.0;
};

// Lowercase hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

// Checksums every path; paths are recorded relative to `base` when inside it.
RunManifest build_manifest(std::string config_source, std::vector<std::string> command,
                           const std::vector<std::filesystem::path>& outputs,
                           const std::filesystem::path& base, double wall_clock_seconds);

std::string manifest_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace ddsim::cli
