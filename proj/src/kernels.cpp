#include "cadlag/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cadlag::kernels {
namespace {

const Ops& pick() {
  const char* force = std::getenv("CADLAG_KERNELS");
  if (force && std::strcmp(force, "scalar") == 0) return scalar_ops();
#ifdef CADLAG_BUILD_AVX2
  if (force && std::strcmp(force, "avx2") == 0) return avx2_ops();
  if (!force && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return avx2_ops();
#endif
  return scalar_ops();
}

} // namespace

const Ops& active() {
  static const Ops& ops = pick();
  return ops;
}

} // namespace cadlag::kernels
