#include "dmf/kernels.hpp"

#include <stdexcept>

#include "kernels_detail.hpp"

namespace dmf::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(DMF_KERNELS_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const detail::OpsTable* table_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &detail::scalar_table;
    case Backend::Avx2:
#if defined(DMF_KERNELS_HAVE_AVX2)
      return &detail::avx2_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

struct Dispatch {
  Backend backend;
  const detail::OpsTable* ops;
  Dispatch() {
    backend = cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
    ops = table_for(backend);
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

bool backend_available(Backend b) {
  if (b == Backend::Scalar) return true;
  return cpu_has_avx2();
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

void force_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("kernel backend not available on this machine");
  }
  dispatch().backend = b;
  dispatch().ops = table_for(b);
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  return dispatch().ops->dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_size(x.size(), y.size());
  dispatch().ops->axpy(alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> x) {
  dispatch().ops->scale(alpha, x.data(), x.size());
}

void clamp_nonneg(std::span<double> x) {
  dispatch().ops->clamp_nonneg(x.data(), x.size());
}

ResidualSums residual_sumsq(std::span<const double> d, std::span<const double> dhat) {
  check_same_size(d.size(), dhat.size());
  ResidualSums out;
  dispatch().ops->residual_sumsq(d.data(), dhat.data(), d.size(), &out.sq_residual,
                                 &out.sq_reference);
  return out;
}

}  // namespace dmf::kernels
