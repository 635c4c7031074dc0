#include "dmf/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "dmf/kernels.hpp"

namespace dmf {
namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void validate_step_inputs(double eta, const UpdateConfig& cfg) {
  if (!(eta > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
}

}  // namespace

double default_eta_init(LossKind kind) { return kind == LossKind::L2 ? 1e-3 : 1e-2; }

UpdateConfig UpdateConfig::with_loss(LossKind kind) {
  UpdateConfig cfg;
  cfg.loss = kind;
  cfg.eta_init = default_eta_init(kind);
  return cfg;
}

std::vector<double> coord_update(std::span<const double> coord,
                                 std::span<const NeighborSample> samples, double eta,
                                 const UpdateConfig& cfg) {
  validate_step_inputs(eta, cfg);
  std::vector<double> out(coord.begin(), coord.end());
  kernels::scale(1.0 - eta * cfg.lambda, out);
  for (const NeighborSample& s : samples) {
    if (s.peer.size() != coord.size()) {
      throw std::invalid_argument("neighbor rank mismatch");
    }
    const double res = s.d - kernels::dot(coord, s.peer);
    const double r = cfg.loss == LossKind::L2 ? res : detail::sign0(res);
    kernels::axpy(eta * s.w * r, s.peer, out);
  }
  if (cfg.nonneg) kernels::clamp_nonneg(out);
  if (!all_finite(out)) {
    throw std::overflow_error("coordinate update overflowed; eta too large");
  }
  return out;
}

StepResult sgd_step(std::span<const double> xi, std::span<const double> yi,
                    std::span<const double> xj, std::span<const double> yj, double d_ij,
                    double d_ji, double eta, const UpdateConfig& cfg) {
  if (xi.size() != yi.size()) throw std::invalid_argument("xi and yi rank mismatch");
  const NeighborSample sx{d_ij, yj, 1.0};
  const NeighborSample sy{d_ji, xj, 1.0};
  return StepResult{coord_update(xi, {&sx, 1}, eta, cfg),
                    coord_update(yi, {&sy, 1}, eta, cfg)};
}

StepResult minibatch_step(std::span<const double> xi, std::span<const double> yi,
                          std::span<const NeighborData> neighbors, double eta,
                          const UpdateConfig& cfg) {
  if (xi.size() != yi.size()) throw std::invalid_argument("xi and yi rank mismatch");
  double weight_sum = 0.0;
  std::vector<NeighborSample> sx;
  std::vector<NeighborSample> sy;
  sx.reserve(neighbors.size());
  sy.reserve(neighbors.size());
  for (const NeighborData& nb : neighbors) {
    weight_sum += nb.w;
    sx.push_back({nb.d_ij, nb.yj, nb.w});
    sy.push_back({nb.d_ji, nb.xj, nb.w});
  }
  if (!(weight_sum > 0.0)) {
    throw std::invalid_argument("minibatch weights must sum to a positive value");
  }
  return StepResult{coord_update(xi, sx, eta, cfg), coord_update(yi, sy, eta, cfg)};
}

LineSearchOutcome line_search(std::span<const double> current,
                              const std::function<double(std::span<const double>)>& objective,
                              const std::function<std::vector<double>(double)>& step,
                              const UpdateConfig& cfg, LineSearchAudit* audit) {
  if (cfg.max_line_search < 1) {
    throw std::invalid_argument("max_line_search must be at least 1");
  }
  const double l0 = objective(current);
  const double slack = cfg.effective_delta(l0);
  double eta = cfg.eta_init;
  for (int trial = 0; trial < cfg.max_line_search; ++trial, eta /= 2.0) {
    std::vector<double> candidate;
    try {
      candidate = step(eta);
    } catch (const std::overflow_error&) {
      continue;  // eta too large; halve and retry
    }
    const double l = objective(candidate);
    if (std::isfinite(l) && l < l0 + slack) {
      if (audit != nullptr) {
        ++audit->accepted;
        if (!(objective(candidate) < l0 + slack)) ++audit->violations;
      }
      return LineSearchOutcome{std::move(candidate), eta};
    }
  }
  if (audit != nullptr) ++audit->skipped;
  return LineSearchOutcome{std::vector<double>(current.begin(), current.end()), 0.0};
}

}  // namespace dmf
