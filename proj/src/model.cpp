#include "dmf/model.hpp"

#include <cmath>
#include <stdexcept>

#include "dmf/kernels.hpp"

namespace dmf {
namespace {

void check_same_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("coordinate rank mismatch");
}

std::vector<double> gradient_impl(LossKind kind, double d, std::span<const double> coord,
                                  std::span<const double> peer) {
  check_same_rank(coord, peer);
  const double res = d - kernels::dot(coord, peer);
  const double factor = kind == LossKind::L2 ? -res : -detail::sign0(res);
  std::vector<double> g(peer.size(), 0.0);
  kernels::axpy(factor, peer, g);
  return g;
}

}  // namespace

double predict(DistanceModel model, const Coordinate& ci, const Coordinate& cj) {
  check_same_rank(ci.x, cj.x);
  check_same_rank(ci.y, cj.y);
  check_same_rank(ci.x, ci.y);
  switch (model) {
    case DistanceModel::Raw:
      return kernels::dot(ci.x, cj.y);
    case DistanceModel::Symmetric:
      return (kernels::dot(ci.x, cj.y) + kernels::dot(cj.x, ci.y)) / 2.0;
    case DistanceModel::HeightSymmetric: {
      if (!ci.height || !cj.height) {
        throw std::invalid_argument("HeightSymmetric requires heights on both nodes");
      }
      const double sym = (kernels::dot(ci.x, cj.y) + kernels::dot(cj.x, ci.y)) / 2.0;
      return sym + *ci.height + *cj.height;
    }
  }
  throw std::invalid_argument("unknown distance model");
}

double loss(LossKind kind, double d, double dhat) {
  const double r = d - dhat;
  return kind == LossKind::L2 ? r * r : std::abs(r);
}

std::vector<double> gradient_x(LossKind kind, double d, std::span<const double> xi,
                               std::span<const double> yj) {
  return gradient_impl(kind, d, xi, yj);
}

std::vector<double> gradient_y(LossKind kind, double d, std::span<const double> yi,
                               std::span<const double> xj) {
  return gradient_impl(kind, d, yi, xj);
}

double local_loss(LossKind kind, std::span<const double> coord,
                  std::span<const NeighborSample> samples, double lambda) {
  double acc = 0.0;
  for (const NeighborSample& s : samples) {
    check_same_rank(coord, s.peer);
    acc += s.w * loss(kind, s.d, kernels::dot(coord, s.peer));
  }
  return acc + lambda * kernels::dot(coord, coord);
}

PartialMatrix::PartialMatrix(int n)
    : n_(n),
      d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0),
      w_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {
  if (n < 1) throw std::invalid_argument("matrix size must be positive");
}

void PartialMatrix::check_index(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw std::out_of_range("matrix index out of range");
  }
}

double PartialMatrix::distance(int i, int j) const {
  check_index(i, j);
  return d_[static_cast<std::size_t>(i) * n_ + j];
}

double PartialMatrix::weight(int i, int j) const {
  check_index(i, j);
  return w_[static_cast<std::size_t>(i) * n_ + j];
}

void PartialMatrix::set(int i, int j, double d, double w) {
  check_index(i, j);
  if (i == j) throw std::invalid_argument("diagonal entries stay unmeasured");
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw std::invalid_argument("measured distances must be finite and nonnegative");
  }
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("weights live in [0,1]");
  d_[static_cast<std::size_t>(i) * n_ + j] = d;
  w_[static_cast<std::size_t>(i) * n_ + j] = w;
}

void PartialMatrix::clear(int i, int j) {
  check_index(i, j);
  d_[static_cast<std::size_t>(i) * n_ + j] = 0.0;
  w_[static_cast<std::size_t>(i) * n_ + j] = 0.0;
}

std::size_t PartialMatrix::measured_count() const {
  std::size_t c = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (i != j && measured(i, j)) ++c;
    }
  }
  return c;
}

}  // namespace dmf
