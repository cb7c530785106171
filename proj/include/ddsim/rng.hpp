#pragma once

#include <cstdint>
#include <random>

namespace ddsim {

// Independent substreams drawn for the same trial.
enum class Substream : std::uint32_t {
  kNoise = 1,
  kPulseErrors = 2,
  kAuxiliary = 3,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Value-type random stream. The engine is std::mt19937_64; the real-valued
// transforms are written out so streams reproduce bit-for-bit across
// standard library implementations.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed);

  // Stream for (master_seed, trial_index, substream). Depends only on the
  // triple, so trials may run in any order on any worker.
  static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index,
                                Substream substream);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1], 53-bit resolution.
  double uniform_open_closed();
  // Uniform on [0, 1), 53-bit resolution.
  double uniform_closed_open();
  // Standard normal via Box-Muller; caches the second variate.
  double standard_normal();

private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace ddsim
