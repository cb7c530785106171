#include "ddsim/cli/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "ddsim/cli/output.hpp"
#include "ddsim/errors.hpp"

namespace ddsim::cli {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw InternalError("SHA-256 initialization failed");
    }
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw InternalError("SHA-256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), digest.data(), &len) != 1) {
      throw InternalError("SHA-256 finalization failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[digest[i] >> 4];
      out += kHex[digest[i] & 0xF];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for checksum");
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw IoError(path.string(), "read failed");
  return h.hex();
}

RunManifest build_manifest(std::string config_source, std::vector<std::string> command,
                           const std::vector<std::filesystem::path>& outputs,
                           const std::filesystem::path& base, double wall_clock_seconds) {
  RunManifest m;
  m.config_source = std::move(config_source);
  m.command = std::move(command);
  m.wall_clock_seconds = wall_clock_seconds;
  for (const auto& p : outputs) {
    ManifestEntry e;
    const auto rel = p.lexically_relative(base);
    const bool inside = !rel.empty() && *rel.begin() != "..";
    e.path = (inside ? rel : p).generic_string();
    e.sha256 = sha256_file(p);
    std::error_code ec;
    e.bytes = std::filesystem::file_size(p, ec);
    if (ec) throw IoError(p.string(), ec.message());
    m.outputs.push_back(std::move(e));
  }
  return m;
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["config_source"] = manifest.config_source;
  j["command"] = manifest.command;
  j["wall_clock_seconds"] = manifest.wall_clock_seconds;
  auto& outs = j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& e : manifest.outputs) {
    outs.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  }
  return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  write_text_file(path, manifest_json(manifest));
}

}  // namespace ddsim::cli
