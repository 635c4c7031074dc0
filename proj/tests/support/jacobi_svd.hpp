#pragma once

// One-sided Jacobi singular values, written from scratch as an oracle that is
// independent of the library's SVD path. Test-only; accuracy over speed.

#include <algorithm>
#include <cmath>
#include <vector>

#include "dmf/baselines.hpp"

namespace testsupport {

inline std::vector<double> jacobi_singular_values(const dmf::DenseMatrix& m) {
  // Work on columns of A (rows >= cols keeps the sweep count small).
  int rows = m.rows;
  int cols = m.cols;
  const bool transpose = rows < cols;
  if (transpose) std::swap(rows, cols);
  std::vector<std::vector<double>> a(cols, std::vector<double>(rows));
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (transpose) {
        a[i][j] = m.at(i, j);
      } else {
        a[j][i] = m.at(i, j);
      }
    }
  }

  const double eps = 1e-14;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int i = 0; i < rows; ++i) {
          alpha += a[p][i] * a[p][i];
          beta += a[q][i] * a[q][i];
          gamma += a[p][i] * a[q][i];
        }
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < rows; ++i) {
          const double ap = a[p][i];
          const double aq = a[q][i];
          a[p][i] = c * ap - s * aq;
          a[q][i] = s * ap + c * aq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(cols);
  for (int j = 0; j < cols; ++j) {
    double norm = 0.0;
    for (int i = 0; i < rows; ++i) norm += a[j][i] * a[j][i];
    sv[j] = std::sqrt(norm);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

}  // namespace testsupport
