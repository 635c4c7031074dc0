#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace dmf {

/// Seeded generator with hand-rolled draw helpers. std:: distributions are
/// avoided on purpose: their output differs between standard libraries, and
/// simulation results must be reproducible from the seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, n), unbiased by rejection.
  std::size_t next_index(std::size_t n) {
    assert(n > 0);
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t rem = (max % n + 1) % n;  // 2^64 mod n
    std::uint64_t r = engine_();
    while (rem != 0 && r > max - rem) r = engine_();
    return static_cast<std::size_t>(r % n);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_index(i)]);
    }
  }

  /// k distinct elements of pool, order randomized. k must be <= pool size.
  std::vector<int> sample_without_replacement(std::span<const int> pool, std::size_t k) {
    assert(k <= pool.size());
    std::vector<int> c(pool.begin(), pool.end());
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(c[i], c[i + next_index(c.size() - i)]);
    }
    c.resize(k);
    return c;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dmf
