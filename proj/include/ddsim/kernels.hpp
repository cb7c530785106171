#pragma once

// Batched SU(2) propagation kernels.
//
// A trial's propagator is U = Z_N P_N ... Z_1 P_1 Z_0 where Z_k dephases by
// the phase accumulated over inter-pulse interval k and P_k is the k-th plate.
// U lies in SU(2), so its first column (a, b) determines it:
//   U = [[a, -conj(b)], [b, conj(a)]].
// Kernels propagate that column for kLanes independent trials at once, in
// structure-of-arrays layout (index = step * kLanes + lane).

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace ddsim::kernels {

inline constexpr std::size_t kLanes = 4;
inline constexpr std::size_t kColumnComponents = 4;  // a_re, a_im, b_re, b_im

enum class KernelKind { kAuto, kScalar, kAvx2 };

struct ChainBatch {
  std::size_t pulse_count = 0;
  std::span<const double> dephase;   // (pulse_count + 1) * kLanes interval phases
  std::span<const double> rotation;  // pulse_count * kLanes plate rotation angles
  std::span<const double> axis_cos;  // pulse_count, shared by all lanes
  std::span<const double> axis_sin;  // pulse_count
};

struct Su2Columns {
  std::array<double, kLanes> a_re{};
  std::array<double, kLanes> a_im{};
  std::array<double, kLanes> b_re{};
  std::array<double, kLanes> b_im{};
};

// `trajectory` is empty or holds (pulse_count + 1) records of
// kColumnComponents * kLanes doubles: the column after each plate, then the
// column at the fiber output.
using ChainFn = void (*)(const ChainBatch& batch, Su2Columns& out, std::span<double> trajectory);

void chain_scalar(const ChainBatch& batch, Su2Columns& out, std::span<double> trajectory);
#if defined(DDSIM_HAVE_AVX2)
void chain_avx2(const ChainBatch& batch, Su2Columns& out, std::span<double> trajectory);
#endif

constexpr std::size_t trajectory_size(std::size_t pulse_count) {
  return (pulse_count + 1) * kColumnComponents * kLanes;
}

// Compiled in and supported by the running CPU.
bool avx2_available();

// kAuto picks the widest available variant. Throws UsageError when an
// explicitly requested variant is unavailable.
KernelKind resolve(KernelKind requested);
ChainFn select_chain(KernelKind requested);
std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

// Elementwise sin/cos helpers, exposed for the equivalence tests.
void sincos_scalar(std::span<const double> x, std::span<double> s, std::span<double> c);
#if defined(DDSIM_HAVE_AVX2)
void sincos_avx2(std::span<const double> x, std::span<double> s, std::span<double> c);
#endif

}  // namespace ddsim::kernels
