// AVX2 variants of the vector kernels. Compiled with -mavx2 only; selected at
// runtime when the CPU reports AVX2 support. FMA is deliberately not used so
// the element-wise kernels round exactly like the scalar reference.

#include "kernels_detail.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace dmf::kernels::detail {
namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
  for (std::size_t i = body; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  const __m256d va = _mm256_set1_pd(alpha);
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (std::size_t i = body; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(double alpha, double* x, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  const __m256d va = _mm256_set1_pd(alpha);
  for (std::size_t i = 0; i < body; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (std::size_t i = body; i < n; ++i) x[i] *= alpha;
}

void clamp_nonneg_avx2(double* x, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    // blend keeps NaN and -0.0 exactly like the scalar comparison does
    const __m256d neg = _mm256_cmp_pd(v, zero, _CMP_LT_OQ);
    _mm256_storeu_pd(x + i, _mm256_blendv_pd(v, zero, neg));
  }
  for (std::size_t i = body; i < n; ++i) {
    if (x[i] < 0.0) x[i] = 0.0;
  }
}

// Four independent Neumaier accumulators, one per lane, merged at the end.
struct NeumaierLanes {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  inline void add(__m256d v) {
    const __m256d t = _mm256_add_pd(sum, v);
    const __m256d big_sum = _mm256_add_pd(_mm256_sub_pd(sum, t), v);
    const __m256d big_v = _mm256_add_pd(_mm256_sub_pd(v, t), sum);
    const __m256d sum_ge = _mm256_cmp_pd(abs_pd(sum), abs_pd(v), _CMP_GE_OQ);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(big_v, big_sum, sum_ge));
    sum = t;
  }

  inline Neumaier merge() const {
    alignas(32) double s[4];
    alignas(32) double c[4];
    _mm256_store_pd(s, sum);
    _mm256_store_pd(c, comp);
    Neumaier out;
    for (int l = 0; l < 4; ++l) out.add(s[l]);
    out.comp += ((c[0] + c[1]) + c[2]) + c[3];
    return out;
  }
};

void residual_sumsq_avx2(const double* d, const double* dhat, std::size_t n,
                         double* sq_residual, double* sq_reference) {
  const std::size_t body = n & ~std::size_t{3};
  NeumaierLanes num_lanes;
  NeumaierLanes den_lanes;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d vd = _mm256_loadu_pd(d + i);
    const __m256d vr = _mm256_sub_pd(vd, _mm256_loadu_pd(dhat + i));
    num_lanes.add(_mm256_mul_pd(vr, vr));
    den_lanes.add(_mm256_mul_pd(vd, vd));
  }
  Neumaier num = num_lanes.merge();
  Neumaier den = den_lanes.merge();
  for (std::size_t i = body; i < n; ++i) {
    const double r = d[i] - dhat[i];
    num.add(r * r);
    den.add(d[i] * d[i]);
  }
  *sq_residual = num.value();
  *sq_reference = den.value();
}

}  // namespace

const OpsTable avx2_table = {
    dot_avx2, axpy_avx2, scale_avx2, clamp_nonneg_avx2, residual_sumsq_avx2,
};

}  // namespace dmf::kernels::detail

#endif  // __AVX2__
