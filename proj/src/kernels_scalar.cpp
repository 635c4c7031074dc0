#include "kernels_detail.hpp"

namespace dmf::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void clamp_nonneg_scalar(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < 0.0) x[i] = 0.0;
  }
}

void residual_sumsq_scalar(const double* d, const double* dhat, std::size_t n,
                           double* sq_residual, double* sq_reference) {
  Neumaier num;
  Neumaier den;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = d[i] - dhat[i];
    num.add(r * r);
    den.add(d[i] * d[i]);
  }
  *sq_residual = num.value();
  *sq_reference = den.value();
}

}  // namespace

const OpsTable scalar_table = {
    dot_scalar, axpy_scalar, scale_scalar, clamp_nonneg_scalar, residual_sumsq_scalar,
};

}  // namespace dmf::kernels::detail
