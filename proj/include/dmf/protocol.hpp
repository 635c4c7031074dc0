#pragma once

#include <span>
#include <vector>

#include "dmf/model.hpp"
#include "dmf/optimizer.hpp"
#include "dmf/rng.hpp"

namespace dmf {

enum class Mode { Active, Passive, Landmark };

struct NeighborRecord {
  int node_id = -1;
  double d_ij = 0.0;  // last filtered measurement i -> j
  double d_ji = 0.0;  // and the reverse slot
  std::vector<double> xj;
  std::vector<double> yj;
  double refreshed_at = 0.0;  // simulation time, seconds

  double age(double now) const { return now - refreshed_at; }
};

/// Per-node cache of recently heard neighbors. Active and landmark nodes keep
/// at most `capacity` records (oldest evicted); passive nodes keep whatever
/// was refreshed within `window` seconds.
struct NeighborSet {
  std::vector<NeighborRecord> records;
  int capacity = 32;
  double window = 1800.0;
};

/// Age-decayed weights, one per record in order:
///   w_j = (a_max - a_j) / sum_k (a_max - a_k)
/// The oldest record gets weight 0. Degenerate cases (a single record, or all
/// ages equal) fall back to uniform weights; the formula is 0/0 there.
std::vector<double> decay_weights(const NeighborSet& set, double now);

struct NodeState {
  int node_id = -1;
  Mode mode = Mode::Active;
  Coordinate coord;
  NeighborSet neighbors;
  /// Fixed at bootstrap for active/landmark nodes; empty in passive mode.
  std::vector<int> probe_list;
};

/// Fresh node with x and y entries drawn uniformly from [0,1). The height is
/// present (at 0) only when with_height is set.
NodeState make_node(int id, int rank, Mode mode, Rng& rng, bool with_height = false);

/// Full update of node i after contacting node j: refresh j's record, apply
/// the retention/eviction policy, weight the neighbor set (age decay in
/// passive mode, binary weights otherwise), then line-search minibatch
/// updates of x_i and y_i. Stored records whose rank no longer matches the
/// node's coordinate are dropped and re-learned.
void on_contact(NodeState& state, int j, double d_ij, double d_ji,
                std::span<const double> xj, std::span<const double> yj, double now,
                const UpdateConfig& cfg, LineSearchAudit* audit = nullptr);

/// Active mode: uniform over the node's fixed probe list. Landmark mode: the
/// probe list holds landmarks only; with no list, uniform over `landmarks`
/// minus the node itself. Never returns the node's own id.
int select_probe_target(const NodeState& state, Rng& rng, std::span<const int> landmarks);

}  // namespace dmf
