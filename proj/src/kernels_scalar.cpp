#include "cadlag/kernels.hpp"

namespace cadlag::kernels {
namespace {

void axpy_scalar(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void add_scalar(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void scale_scalar(double* y, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

} // namespace

const Ops& scalar_ops() {
  static const Ops ops{axpy_scalar, dot_scalar, add_scalar, scale_scalar, "scalar"};
  return ops;
}

} // namespace cadlag::kernels
