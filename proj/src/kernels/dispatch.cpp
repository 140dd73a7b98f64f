#include <cstdlib>

#include "penlmc/kernels.hpp"

namespace penlmc::kernels {
namespace {

const KernelOps& pick() {
  if (std::getenv("PENLMC_FORCE_SCALAR")) return scalar_kernels();
#if defined(PENLMC_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return avx2_kernels();
#endif
#if defined(PENLMC_HAVE_NEON_TU) && defined(__aarch64__)
  return neon_kernels();
#endif
  return scalar_kernels();
}

}  // namespace

const KernelOps& active_kernels() {
  static const KernelOps& ops = pick();
  return ops;
}

}  // namespace penlmc::kernels
