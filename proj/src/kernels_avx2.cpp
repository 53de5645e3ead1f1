#include "cadlag/kernels.hpp"

#include <immintrin.h>

// AVX2+FMA variants. Tail elements are handled scalar; blocks here are short
// (d^k for d<=4, k<=6) so the 4-lane main loop plus tail is the whole story.

namespace cadlag::kernels {
namespace {

void axpy_avx2(double* y, const double* x, double a, std::size_t n) {
  std::size_t i = 0;
  const __m256d va = _mm256_set1_pd(a);
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d vx = _mm256_loadu_pd(x + i);
    vy = _mm256_fmadd_pd(va, vx, vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void add_avx2(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] += x[i];
}

void scale_avx2(double* y, double a, std::size_t n) {
  std::size_t i = 0;
  const __m256d va = _mm256_set1_pd(a);
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] *= a;
}

} // namespace

const Ops& avx2_ops() {
  static const Ops ops{axpy_avx2, dot_avx2, add_avx2, scale_avx2, "avx2"};
  return ops;
}

} // namespace cadlag::kernels
