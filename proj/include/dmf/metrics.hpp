#pragma once

#include <span>
#include <vector>

namespace dmf {

/// Measured/predicted distance pairs, stored column-wise so the reductions
/// run over contiguous arrays. Every measured value must be positive: REE
/// divides by it, and zero-RTT pairs are excluded from all three metrics.
class EvalPairSet {
 public:
  void add(double d, double dhat);
  void reserve(std::size_t n);
  std::size_t size() const { return d_.size(); }
  bool empty() const { return d_.empty(); }
  std::span<const double> measured() const { return d_; }
  std::span<const double> predicted() const { return dhat_; }

 private:
  std::vector<double> d_;
  std::vector<double> dhat_;
};

/// |dhat - d| / d per pair, in input order.
std::vector<double> ree_values(const EvalPairSet& pairs);

/// sqrt( sum (d - dhat)^2 / sum d^2 ) over the supplied pairs.
double stress(const EvalPairSet& pairs);

/// Median of |d - dhat|; an even count takes the mean of the middle two.
double mae(const EvalPairSet& pairs);

/// Linear-interpolation quantile of unsorted data, q in [0,1]. q = 0.5
/// reproduces the even-count median convention above.
double quantile(std::vector<double> values, double q);

double median(std::vector<double> values);

}  // namespace dmf
