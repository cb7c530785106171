#include <string>

#include "ddsim/errors.hpp"
#include "ddsim/kernels.hpp"

namespace ddsim::kernels {

bool avx2_available() {
#if defined(DDSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported;
#else
  return false;
#endif
}

KernelKind resolve(KernelKind requested) {
  switch (requested) {
    case KernelKind::kAuto:
      return avx2_available() ? KernelKind::kAvx2 : KernelKind::kScalar;
    case KernelKind::kScalar:
      return KernelKind::kScalar;
    case KernelKind::kAvx2:
      if (!avx2_available()) {
        throw UsageError("AVX2 kernel requested but not available on this build/CPU");
      }
      return KernelKind::kAvx2;
  }
  return KernelKind::kScalar;
}

ChainFn select_chain(KernelKind requested) {
  switch (resolve(requested)) {
#if defined(DDSIM_HAVE_AVX2)
    case KernelKind::kAvx2:
      return &chain_avx2;
#endif
    default:
      return &chain_scalar;
  }
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kAuto: return "auto";
    case KernelKind::kScalar: return "scalar";
    case KernelKind::kAvx2: return "avx2";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "auto") return KernelKind::kAuto;
  if (name == "scalar") return KernelKind::kScalar;
  if (name == "avx2") return KernelKind::kAvx2;
  throw UsageError("unknown kernel '" + std::string(name) + "' (expected auto|scalar|avx2)");
}

}  // namespace ddsim::kernels
