#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dmf/rng.hpp"

namespace dmf {

/// Dense row-major matrix, the input type of the SVD baseline.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(int r, int c)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

/// Row-major factor pair: row i of x and y is node i's coordinate.
struct FactorPair {
  int n = 0;
  int r = 0;
  std::vector<double> x;
  std::vector<double> y;

  std::span<const double> x_row(int i) const {
    return {x.data() + static_cast<std::size_t>(i) * r, static_cast<std::size_t>(r)};
  }
  std::span<const double> y_row(int i) const {
    return {y.data() + static_cast<std::size_t>(i) * r, static_cast<std::size_t>(r)};
  }
  double predict(int i, int j) const;
};

/// Truncated-SVD factorization: with D = U S V^T, returns X = U S_r^(1/2) and
/// Y = V S_r^(1/2) with all but the r largest singular values zeroed, so
/// X Y^T is the best rank-r approximation of m in the Frobenius norm.
FactorPair svd_lowrank(const DenseMatrix& m, int r);

/// All singular values of m, nonincreasing.
std::vector<double> singular_values(const DenseMatrix& m);

/// Euclidean-embedding coordinate: a position and an optional access-link
/// height added to every predicted distance.
struct EuclideanCoord {
  std::vector<double> x;
  std::optional<double> height;
};

/// ||a - b|| plus both heights when present. Heights must be present on both
/// coordinates or on neither.
double euclidean_predict(const EuclideanCoord& a, const EuclideanCoord& b);

/// Constant-step Vivaldi update:
///   x_i' = x_i + eta (d_ij - dhat) (x_i - x_j) / dhat
/// When the coordinates coincide (dhat = 0) the move is taken along a random
/// unit direction. With heights on, dhat includes h_i + h_j and the height
/// moves by half the eta-scaled residual, floored at 0.
EuclideanCoord vivaldi_step(const EuclideanCoord& xi, const EuclideanCoord& xj, double d_ij,
                            double eta, Rng& rng);

}  // namespace dmf
