#include "dmf/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "dmf/kernels.hpp"

namespace dmf {
namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) out(i, j) = m.at(i, j);
  }
  return out;
}

}  // namespace

double FactorPair::predict(int i, int j) const {
  return kernels::dot(x_row(i), y_row(j));
}

FactorPair svd_lowrank(const DenseMatrix& m, int r) {
  const int max_rank = std::min(m.rows, m.cols);
  if (r < 1 || r > max_rank) throw std::invalid_argument("rank out of range");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("SVD failed to converge");
  }
  const auto& s = svd.singularValues();
  FactorPair f;
  f.n = m.rows;
  f.r = r;
  f.x.resize(static_cast<std::size_t>(m.rows) * r);
  f.y.resize(static_cast<std::size_t>(m.cols) * r);
  for (int c = 0; c < r; ++c) {
    const double scale = std::sqrt(s(c));
    for (int i = 0; i < m.rows; ++i) {
      f.x[static_cast<std::size_t>(i) * r + c] = svd.matrixU()(i, c) * scale;
    }
    for (int j = 0; j < m.cols; ++j) {
      f.y[static_cast<std::size_t>(j) * r + c] = svd.matrixV()(j, c) * scale;
    }
  }
  return f;
}

std::vector<double> singular_values(const DenseMatrix& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(to_eigen(m));
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("SVD failed to converge");
  }
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

double euclidean_predict(const EuclideanCoord& a, const EuclideanCoord& b) {
  if (a.x.size() != b.x.size()) throw std::invalid_argument("dimension mismatch");
  if (a.height.has_value() != b.height.has_value()) {
    throw std::invalid_argument("heights must be present on both nodes or neither");
  }
  double sq = 0.0;
  for (std::size_t c = 0; c < a.x.size(); ++c) {
    const double diff = a.x[c] - b.x[c];
    sq += diff * diff;
  }
  double d = std::sqrt(sq);
  if (a.height) d += *a.height + *b.height;
  return d;
}

EuclideanCoord vivaldi_step(const EuclideanCoord& xi, const EuclideanCoord& xj, double d_ij,
                            double eta, Rng& rng) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!std::isfinite(d_ij) || d_ij < 0.0) {
    throw std::invalid_argument("measurement must be finite and nonnegative");
  }
  const double dhat = euclidean_predict(xi, xj);
  const double residual = d_ij - dhat;
  EuclideanCoord out = xi;
  if (dhat == 0.0) {
    // coincident coordinates: push along a random unit direction
    double norm = 0.0;
    std::vector<double> dir(xi.x.size());
    while (norm < 1e-12) {
      norm = 0.0;
      for (double& v : dir) {
        v = 2.0 * rng.next_double() - 1.0;
        norm += v * v;
      }
      norm = std::sqrt(norm);
    }
    for (std::size_t c = 0; c < dir.size(); ++c) {
      out.x[c] += eta * residual * dir[c] / norm;
    }
  } else {
    const double scale = eta * residual / dhat;
    for (std::size_t c = 0; c < out.x.size(); ++c) {
      out.x[c] += scale * (xi.x[c] - xj.x[c]);
    }
  }
  if (out.height) {
    out.height = std::max(0.0, *out.height + eta * residual * 0.5);
  }
  return out;
}

}  // namespace dmf
