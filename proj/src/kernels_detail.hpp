#pragma once

#include <cstddef>

namespace dmf::kernels::detail {

// Every backend fills one of these. Pointer-based so the hot call sites stay
// branch-free after startup.
struct OpsTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*scale)(double alpha, double* x, std::size_t n);
  void (*clamp_nonneg)(double* x, std::size_t n);
  void (*residual_sumsq)(const double* d, const double* dhat, std::size_t n,
                         double* sq_residual, double* sq_reference);
};

extern const OpsTable scalar_table;

#if defined(DMF_KERNELS_HAVE_AVX2)
extern const OpsTable avx2_table;
#endif

// Running Neumaier accumulator shared by the scalar kernels and the tail
// handling of the vector ones.
struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if ((sum >= 0 ? sum : -sum) >= (v >= 0 ? v : -v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace dmf::kernels::detail
