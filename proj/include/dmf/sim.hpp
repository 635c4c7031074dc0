#pragma once

#include <cstdint>
#include <vector>

#include "dmf/baselines.hpp"
#include "dmf/data.hpp"
#include "dmf/model.hpp"
#include "dmf/optimizer.hpp"
#include "dmf/protocol.hpp"

namespace dmf {

struct SimConfig {
  Mode mode = Mode::Active;
  /// Neighbors probed per node (active mode) or landmarks sampled per node.
  int k = 32;
  /// Landmark mode only: the designated node ids.
  std::vector<int> landmarks;
  UpdateConfig update;
  DistanceModel distance_model = DistanceModel::Raw;
  std::uint64_t seed = 0;
  /// Active/landmark: each round lets every node probe once, in a seeded
  /// random order.
  int rounds = 320;
  /// Measurements between metric snapshots. 0 picks one snapshot per round
  /// (active/landmark) or ~100 snapshots across a trace (passive).
  std::uint64_t snapshot_every = 0;
  /// Passive mode: both the median-filter window and the neighbor retention
  /// window.
  double passive_window_ms = 1'800'000.0;
  /// Baseline runner parameters.
  double vivaldi_eta = 0.05;
  bool vivaldi_height = false;
};

struct Snapshot {
  double measurements_per_node = 0.0;
  double stress = 0.0;
  double mae = 0.0;
  /// One relative-error sample per evaluated pair, in pair order.
  std::vector<double> ree;
  /// Stress over the pairs being fit (the probed ones), for convergence
  /// diagnostics; equals `stress` in passive mode.
  double train_stress = 0.0;
  /// Smallest coordinate entry across all nodes at snapshot time.
  double min_coord_entry = 0.0;
};

struct SimResult {
  std::vector<Snapshot> snapshots;
  /// Final factor pairs (DMFSGD runs).
  std::vector<Coordinate> coords;
  /// Final embedding coordinates (Vivaldi runs).
  std::vector<EuclideanCoord> eucl_coords;
  LineSearchAudit audit;
  /// Bootstrap outcome, for audits: the fixed neighbor list of each node and
  /// the directed pairs metrics were evaluated on (empty lists in passive
  /// mode, where every ground-truth pair is evaluated).
  std::vector<std::vector<int>> probe_lists;
  std::vector<std::pair<int, int>> eval_pairs;
};

/// Seeded round-robin active probing over a fixed random k-neighbor list per
/// node. Metrics are evaluated over measured pairs outside every neighbor
/// list; when no such pair exists the evaluation falls back to all measured
/// pairs. Byte-for-byte reproducible from (cfg, truth).
SimResult run_active(const SimConfig& cfg, const PartialMatrix& truth);

/// run_active with candidate neighbor sets restricted to cfg.landmarks.
SimResult run_landmark(const SimConfig& cfg, const PartialMatrix& truth);

/// Replays a time-ordered trace: each event refreshes the pair's median
/// filter and triggers a contact at the source node with the filtered value,
/// with age-decayed neighbor weights. Evaluation targets ground_truth(trace).
SimResult run_passive(const SimConfig& cfg, const TraceDataset& trace);

/// The comparison baseline: the same probing loop as run_active driving
/// constant-eta Vivaldi updates of a cfg.update.rank-dimensional embedding.
SimResult run_vivaldi(const SimConfig& cfg, const PartialMatrix& truth);

}  // namespace dmf
