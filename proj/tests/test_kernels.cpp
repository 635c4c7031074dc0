#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "dmf/kernels.hpp"
#include "dmf/rng.hpp"

namespace k = dmf::kernels;

namespace {

// Restores the detected backend when a test section finishes.
struct BackendGuard {
  k::Backend saved = k::active_backend();
  ~BackendGuard() { k::force_backend(saved); }
};

std::vector<double> random_vec(dmf::Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.next_double();
  return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 31, 64, 130, 1023};

}  // namespace

TEST_CASE("dot matches a plain loop") {
  dmf::Rng rng(11);
  for (std::size_t n : kSizes) {
    const auto a = random_vec(rng, n, -1.0, 1.0);
    const auto b = random_vec(rng, n, -1.0, 1.0);
    double expect = 0.0;
    double scale = 1e-30;
    for (std::size_t i = 0; i < n; ++i) {
      expect += a[i] * b[i];
      scale += std::abs(a[i] * b[i]);
    }
    CHECK(std::abs(k::dot(a, b) - expect) <= 1e-12 * scale);
  }
}

TEST_CASE("dot rejects mismatched lengths") {
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> b{1.0};
  CHECK_THROWS_AS((void)k::dot(a, b), std::invalid_argument);
}

TEST_CASE("clamp_nonneg zeroes exactly the negative entries") {
  std::vector<double> v{-1.5, 0.0, -0.0, 2.25, -1e-300, 7.0};
  k::clamp_nonneg(v);
  CHECK(v == std::vector<double>{0.0, 0.0, 0.0, 2.25, 0.0, 7.0});
  CHECK(std::signbit(v[2]));  // -0.0 is not negative and stays put
}

TEST_CASE("residual_sumsq is order-insensitive thanks to compensation") {
  dmf::Rng rng(5);
  std::vector<double> d;
  std::vector<double> dhat;
  for (int i = 0; i < 500; ++i) {
    const double big = 1e9 * rng.next_double();
    const double small = 1e-6 * rng.next_double();
    d.push_back(big);
    d.push_back(small + 1e-9);
    dhat.push_back(big * (1.0 + 1e-7));
    dhat.push_back(small);
  }
  const auto fwd = k::residual_sumsq(d, dhat);
  std::vector<double> rd(d.rbegin(), d.rend());
  std::vector<double> rdh(dhat.rbegin(), dhat.rend());
  const auto rev = k::residual_sumsq(rd, rdh);
  CHECK(fwd.sq_residual == doctest::Approx(rev.sq_residual).epsilon(1e-13));
  CHECK(fwd.sq_reference == doctest::Approx(rev.sq_reference).epsilon(1e-13));
}

TEST_CASE("scalar backend is always available and forceable") {
  BackendGuard guard;
  CHECK(k::backend_available(k::Backend::Scalar));
  k::force_backend(k::Backend::Scalar);
  CHECK(k::active_backend() == k::Backend::Scalar);
  CHECK(k::backend_name(k::Backend::Scalar) == "scalar");
}

TEST_CASE("simd and scalar backends agree") {
  if (!k::backend_available(k::Backend::Avx2)) {
    MESSAGE("AVX2 not available; equivalence covered by the scalar path alone");
    return;
  }
  BackendGuard guard;
  dmf::Rng rng(99);

  for (std::size_t n : kSizes) {
    const auto a = random_vec(rng, n, -10.0, 10.0);
    const auto b = random_vec(rng, n, -10.0, 10.0);
    const double alpha = 2.0 * rng.next_double() - 1.0;

    k::force_backend(k::Backend::Scalar);
    const double dot_s = k::dot(a, b);
    auto axpy_s = b;
    k::axpy(alpha, a, axpy_s);
    auto scale_s = a;
    k::scale(alpha, scale_s);
    auto clamp_s = a;
    k::clamp_nonneg(clamp_s);
    const auto sums_s = k::residual_sumsq(a, b);

    k::force_backend(k::Backend::Avx2);
    const double dot_v = k::dot(a, b);
    auto axpy_v = b;
    k::axpy(alpha, a, axpy_v);
    auto scale_v = a;
    k::scale(alpha, scale_v);
    auto clamp_v = a;
    k::clamp_nonneg(clamp_v);
    const auto sums_v = k::residual_sumsq(a, b);

    // element-wise kernels round identically; reductions may differ only by
    // reassociation
    CHECK(std::memcmp(axpy_s.data(), axpy_v.data(), n * sizeof(double)) == 0);
    CHECK(std::memcmp(scale_s.data(), scale_v.data(), n * sizeof(double)) == 0);
    CHECK(std::memcmp(clamp_s.data(), clamp_v.data(), n * sizeof(double)) == 0);
    double dot_scale = 1e-30;
    for (std::size_t i = 0; i < n; ++i) dot_scale += std::abs(a[i] * b[i]);
    CHECK(std::abs(dot_s - dot_v) <= 1e-12 * dot_scale);
    CHECK(sums_s.sq_residual == doctest::Approx(sums_v.sq_residual).epsilon(1e-13));
    CHECK(sums_s.sq_reference == doctest::Approx(sums_v.sq_reference).epsilon(1e-13));
  }
}
