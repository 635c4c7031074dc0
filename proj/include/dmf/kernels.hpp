#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace dmf::kernels {

/// Kernel backends. Scalar is the reference implementation and is always
/// available; Avx2 is compiled on x86-64 and used when the CPU supports it.
enum class Backend { Scalar, Avx2 };

Backend active_backend();
bool backend_available(Backend b);
std::string_view backend_name(Backend b);

/// Overrides the auto-detected backend. Throws std::invalid_argument if the
/// requested backend was not compiled in or the CPU cannot run it.
void force_backend(Backend b);

double dot(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// x *= alpha
void scale(double alpha, std::span<double> x);

/// Negative entries become 0; everything else (including -0.0) is kept.
void clamp_nonneg(std::span<double> x);

struct ResidualSums {
  double sq_residual = 0.0;   // sum (d - dhat)^2
  double sq_reference = 0.0;  // sum d^2
};

/// Both sums in one pass with Neumaier compensation, so serial and
/// vectorized evaluations agree to ~1e-15 relative.
ResidualSums residual_sumsq(std::span<const double> d, std::span<const double> dhat);

}  // namespace dmf::kernels
