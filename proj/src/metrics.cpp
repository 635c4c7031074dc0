#include "dmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dmf/kernels.hpp"

namespace dmf {

void EvalPairSet::add(double d, double dhat) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw std::invalid_argument("measured value must be finite and positive");
  }
  d_.push_back(d);
  dhat_.push_back(dhat);
}

void EvalPairSet::reserve(std::size_t n) {
  d_.reserve(n);
  dhat_.reserve(n);
}

std::vector<double> ree_values(const EvalPairSet& pairs) {
  std::vector<double> out(pairs.size());
  const auto d = pairs.measured();
  const auto dhat = pairs.predicted();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::abs(dhat[i] - d[i]) / d[i];
  }
  return out;
}

double stress(const EvalPairSet& pairs) {
  if (pairs.empty()) throw std::invalid_argument("stress of an empty pair set");
  const auto sums = kernels::residual_sumsq(pairs.measured(), pairs.predicted());
  return std::sqrt(sums.sq_residual / sums.sq_reference);
}

double mae(const EvalPairSet& pairs) {
  if (pairs.empty()) throw std::invalid_argument("mae of an empty pair set");
  std::vector<double> errs(pairs.size());
  const auto d = pairs.measured();
  const auto dhat = pairs.predicted();
  for (std::size_t i = 0; i < errs.size(); ++i) errs[i] = std::abs(d[i] - dhat[i]);
  return median(std::move(errs));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must be in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

}  // namespace dmf
