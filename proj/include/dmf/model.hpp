#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dmf {

enum class LossKind { L2, L1 };

/// How a distance estimate is read off two factor pairs.
enum class DistanceModel { Raw, Symmetric, HeightSymmetric };

/// A node's factor pair: one row of X, one row of Y, and an optional
/// access-link height in milliseconds (used only by HeightSymmetric).
struct Coordinate {
  std::vector<double> x;
  std::vector<double> y;
  std::optional<double> height;

  int rank() const { return static_cast<int>(x.size()); }
};

/// Raw        -> x_i . y_j
/// Symmetric  -> (x_i . y_j + x_j . y_i) / 2
/// HeightSymmetric -> symmetric value + h_i + h_j
/// Raw and Symmetric estimates may be negative when nonnegativity is off.
double predict(DistanceModel model, const Coordinate& ci, const Coordinate& cj);

/// L2 -> (d - dhat)^2, L1 -> |d - dhat|.
double loss(LossKind kind, double d, double dhat);

/// Single-sample loss gradients with respect to x_i / y_i, with the constant
/// factor of the L2 derivative dropped (the update rules absorb it):
///   L2 -> -(d - x_i.y_j) y_j        L1 -> -sign(d - x_i.y_j) y_j
/// sign(0) is taken as 0, so a zero residual yields a zero vector.
std::vector<double> gradient_x(LossKind kind, double d, std::span<const double> xi,
                               std::span<const double> yj);
std::vector<double> gradient_y(LossKind kind, double d, std::span<const double> yi,
                               std::span<const double> xj);

/// One cached measurement as seen from one side of an update: the measured
/// distance, the peer vector it pairs with (y_j when updating x_i, x_j when
/// updating y_i), and its weight.
struct NeighborSample {
  double d = 0.0;
  std::span<const double> peer;
  double w = 1.0;
};

/// Regularized loss of one coordinate row against its cached samples:
///   sum_j w_j * loss(d_j, coord . peer_j) + lambda * ||coord||^2
/// This is the objective the line search drives down.
double local_loss(LossKind kind, std::span<const double> coord,
                  std::span<const NeighborSample> samples, double lambda);

/// n x n distance matrix with a weight/availability mask. Unmeasured entries
/// exist only through the mask; their stored distance is never read by any
/// computation. Diagonal entries always carry weight 0.
class PartialMatrix {
 public:
  PartialMatrix() = default;
  explicit PartialMatrix(int n);

  int size() const { return n_; }
  double distance(int i, int j) const;
  double weight(int i, int j) const;
  bool measured(int i, int j) const { return weight(i, j) > 0.0; }

  /// Records d_ij with weight w (default 1). Setting a diagonal entry or a
  /// negative distance is a contract violation.
  void set(int i, int j, double d, double w = 1.0);
  void clear(int i, int j);

  std::size_t measured_count() const;

 private:
  void check_index(int i, int j) const;

  int n_ = 0;
  std::vector<double> d_;
  std::vector<double> w_;
};

namespace detail {
/// sign with sign(0) := 0.
inline double sign0(double r) { return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0); }
}  // namespace detail

}  // namespace dmf
