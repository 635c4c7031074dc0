#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dmf/model.hpp"

namespace dmf {

/// 1e-3 for L2, 1e-2 for L1.
double default_eta_init(LossKind kind);

struct UpdateConfig {
  double lambda = 1.0;
  int rank = 10;
  LossKind loss = LossKind::L1;
  bool nonneg = true;
  double eta_init = 1e-2;
  int max_line_search = 20;
  /// Relative line-search slack: the accepted loss may exceed the starting
  /// loss by at most delta * max(1, starting loss).
  double delta = 1e-4;

  double effective_delta(double l0) const { return delta * (l0 > 1.0 ? l0 : 1.0); }

  /// Defaults with the learning rate matched to the loss kind.
  static UpdateConfig with_loss(LossKind kind);
};

/// One cached neighbor as consumed by the two-sided update rules.
struct NeighborData {
  std::span<const double> yj;
  std::span<const double> xj;
  double d_ij = 0.0;
  double d_ji = 0.0;
  double w = 1.0;
};

struct StepResult {
  std::vector<double> xi;
  std::vector<double> yi;
};

/// coord' = (1 - eta*lambda) coord + eta * sum_j w_j res_j peer_j, where res_j
/// is the raw residual for L2 and its sign for L1, clamped to nonnegative
/// entries when cfg.nonneg. Residuals use the incoming coord. Throws
/// std::overflow_error if any resulting entry is not finite (eta too large).
std::vector<double> coord_update(std::span<const double> coord,
                                 std::span<const NeighborSample> samples, double eta,
                                 const UpdateConfig& cfg);

/// Single-sample update of both of node i's rows against neighbor j.
StepResult sgd_step(std::span<const double> xi, std::span<const double> yi,
                    std::span<const double> xj, std::span<const double> yj, double d_ij,
                    double d_ji, double eta, const UpdateConfig& cfg);

/// Minibatch update over a whole neighbor set. With a single neighbor of
/// weight 1 this equals sgd_step exactly.
StepResult minibatch_step(std::span<const double> xi, std::span<const double> yi,
                          std::span<const NeighborData> neighbors, double eta,
                          const UpdateConfig& cfg);

struct LineSearchAudit {
  std::uint64_t accepted = 0;
  std::uint64_t skipped = 0;
  /// Accepted coordinates that fail the slack check when re-evaluated.
  std::uint64_t violations = 0;
};

struct LineSearchOutcome {
  std::vector<double> coord;
  /// 0 when every trial was rejected and coord is the unchanged input.
  double eta_used = 0.0;
};

/// Tries eta = cfg.eta_init and halves it up to cfg.max_line_search times,
/// returning the first candidate whose objective beats the starting value
/// plus the slack. Non-finite candidates and objective values count as
/// rejected trials. Exhaustion is a no-op, not an error.
LineSearchOutcome line_search(std::span<const double> current,
                              const std::function<double(std::span<const double>)>& objective,
                              const std::function<std::vector<double>(double)>& step,
                              const UpdateConfig& cfg, LineSearchAudit* audit = nullptr);

}  // namespace dmf
