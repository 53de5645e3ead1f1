#pragma once

#include <cstddef>

// Flat double-array kernels behind the tensor arithmetic. Every kernel has a
// scalar reference implementation and (on x86-64 with AVX2+FMA) a vectorized
// variant; the active set is chosen once at startup from CPUID and can be
// forced with the environment variable CADLAG_KERNELS=scalar|avx2.

namespace cadlag::kernels {

struct Ops {
  // y[i] += a * x[i]
  void (*axpy)(double* y, const double* x, double a, std::size_t n);
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += x[i]
  void (*add)(double* y, const double* x, std::size_t n);
  // y[i] *= a
  void (*scale)(double* y, double a, std::size_t n);
  const char* name;
};

const Ops& scalar_ops();
#ifdef CADLAG_BUILD_AVX2
const Ops& avx2_ops();
#endif

// Dispatched entry points.
const Ops& active();

inline void axpy(double* y, const double* x, double a, std::size_t n) { active().axpy(y, x, a, n); }
inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline void add(double* y, const double* x, std::size_t n) { active().add(y, x, n); }
inline void scale(double* y, double a, std::size_t n) { active().scale(y, a, n); }

} // namespace cadlag::kernels
