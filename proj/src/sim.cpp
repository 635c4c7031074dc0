#include "dmf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "dmf/log.hpp"
#include "dmf/metrics.hpp"

namespace dmf {
namespace {

using PairList = std::vector<std::pair<int, int>>;

std::vector<std::vector<int>> active_pools(const PartialMatrix& truth) {
  const int n = truth.size();
  std::vector<std::vector<int>> pools(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && truth.measured(i, j)) pools[i].push_back(j);
    }
    if (pools[i].empty()) {
      throw std::invalid_argument("node " + std::to_string(i) +
                                  " has no measured candidate neighbors");
    }
  }
  return pools;
}

std::vector<std::vector<int>> landmark_pools(const PartialMatrix& truth,
                                             const std::vector<int>& landmarks) {
  const int n = truth.size();
  if (landmarks.empty()) throw std::invalid_argument("landmark mode needs landmarks");
  std::vector<int> sorted = landmarks;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int lm : sorted) {
    if (lm < 0 || lm >= n) throw std::invalid_argument("landmark id out of range");
  }
  std::vector<std::vector<int>> pools(n);
  for (int i = 0; i < n; ++i) {
    for (int lm : sorted) {
      if (lm == i) continue;
      if (!truth.measured(i, lm)) {
        throw std::invalid_argument("pair (" + std::to_string(i) + "," +
                                    std::to_string(lm) + ") is unmeasured");
      }
      pools[i].push_back(lm);
    }
    // Only a sole landmark may end up with nothing to probe; it simply sits
    // out the rounds.
    if (pools[i].empty() && !(sorted.size() == 1 && sorted[0] == i)) {
      throw std::invalid_argument("node " + std::to_string(i) +
                                  " has no landmark to probe");
    }
  }
  return pools;
}

std::vector<std::vector<int>> sample_lists(const std::vector<std::vector<int>>& pools,
                                           int k, Rng& rng) {
  std::vector<std::vector<int>> lists(pools.size());
  for (std::size_t i = 0; i < pools.size(); ++i) {
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                   pools[i].size());
    lists[i] = rng.sample_without_replacement(pools[i], take);
  }
  return lists;
}

struct EvalPlan {
  PairList eval_pairs;   // metric pairs (held out when possible)
  PairList train_pairs;  // the probed pairs, for convergence diagnostics
};

EvalPlan build_eval_plan(const PartialMatrix& truth,
                         const std::vector<std::vector<int>>& lists) {
  const int n = truth.size();
  std::vector<char> in_list(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j : lists[i]) in_list[static_cast<std::size_t>(i) * n + j] = 1;
  }
  EvalPlan plan;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !truth.measured(i, j) || !(truth.distance(i, j) > 0.0)) continue;
      const bool probed = in_list[static_cast<std::size_t>(i) * n + j] != 0 ||
                          in_list[static_cast<std::size_t>(j) * n + i] != 0;
      if (!probed) plan.eval_pairs.emplace_back(i, j);
      if (in_list[static_cast<std::size_t>(i) * n + j] != 0) {
        plan.train_pairs.emplace_back(i, j);
      }
    }
  }
  if (plan.eval_pairs.empty()) {
    // Every measured pair sits in some neighbor list (tiny configurations);
    // evaluate over all of them instead of reporting nothing.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && truth.measured(i, j) && truth.distance(i, j) > 0.0) {
          plan.eval_pairs.emplace_back(i, j);
        }
      }
    }
  }
  return plan;
}

Snapshot take_snapshot(double meas_per_node, const PartialMatrix& truth,
                       const EvalPlan& plan,
                       const std::function<double(int, int)>& predict_fn,
                       double min_coord_entry) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Snapshot s;
  s.measurements_per_node = meas_per_node;
  s.min_coord_entry = min_coord_entry;

  EvalPairSet eval;
  eval.reserve(plan.eval_pairs.size());
  for (const auto& [i, j] : plan.eval_pairs) {
    eval.add(truth.distance(i, j), predict_fn(i, j));
  }
  if (eval.empty()) {
    s.stress = nan;
    s.mae = nan;
  } else {
    s.stress = stress(eval);
    s.mae = mae(eval);
    s.ree = ree_values(eval);
  }

  EvalPairSet train;
  train.reserve(plan.train_pairs.size());
  for (const auto& [i, j] : plan.train_pairs) {
    train.add(truth.distance(i, j), predict_fn(i, j));
  }
  s.train_stress = train.empty() ? s.stress : stress(train);
  return s;
}

double min_entry(const std::vector<EuclideanCoord>& coords) {
  double m = std::numeric_limits<double>::infinity();
  for (const EuclideanCoord& c : coords) {
    for (double v : c.x) m = std::min(m, v);
  }
  return m;
}

double min_entry(const std::vector<NodeState>& nodes) {
  double m = std::numeric_limits<double>::infinity();
  for (const NodeState& s : nodes) {
    for (double v : s.coord.x) m = std::min(m, v);
    for (double v : s.coord.y) m = std::min(m, v);
  }
  return m;
}

void validate_common(const SimConfig& cfg, const PartialMatrix& truth) {
  if (truth.size() < 2) throw std::invalid_argument("need at least two nodes");
  if (cfg.k < 1) throw std::invalid_argument("k must be at least 1");
  if (cfg.rounds < 0) throw std::invalid_argument("rounds must be nonnegative");
  if (cfg.update.rank < 1) throw std::invalid_argument("rank must be at least 1");
}

SimResult run_probing(const SimConfig& cfg, const PartialMatrix& truth, Mode mode) {
  validate_common(cfg, truth);
  const int n = truth.size();
  Rng rng(cfg.seed);

  std::vector<NodeState> nodes;
  nodes.reserve(n);
  for (int i = 0; i < n; ++i) {
    NodeState s = make_node(i, cfg.update.rank, mode, rng,
                            cfg.distance_model == DistanceModel::HeightSymmetric);
    s.neighbors.capacity = cfg.k;
    nodes.push_back(std::move(s));
  }

  const auto pools = mode == Mode::Landmark ? landmark_pools(truth, cfg.landmarks)
                                            : active_pools(truth);
  const auto lists = sample_lists(pools, cfg.k, rng);
  for (int i = 0; i < n; ++i) nodes[i].probe_list = lists[i];

  const EvalPlan plan = build_eval_plan(truth, lists);
  log_info("probing sim: n=" + std::to_string(n) + " eval_pairs=" +
           std::to_string(plan.eval_pairs.size()) + " train_pairs=" +
           std::to_string(plan.train_pairs.size()));

  const auto predict_fn = [&](int i, int j) {
    return predict(cfg.distance_model, nodes[i].coord, nodes[j].coord);
  };

  SimResult result;
  const std::uint64_t snap_every =
      cfg.snapshot_every > 0 ? cfg.snapshot_every : static_cast<std::uint64_t>(n);
  std::uint64_t meas = 0;

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  for (int round = 0; round < cfg.rounds; ++round) {
    rng.shuffle(order);
    for (int i : order) {
      if (nodes[i].probe_list.empty()) continue;  // sole landmark
      const int t = select_probe_target(nodes[i], rng, cfg.landmarks);
      const double d = truth.distance(i, t);
      on_contact(nodes[i], t, d, d, nodes[t].coord.x, nodes[t].coord.y,
                 static_cast<double>(round), cfg.update, &result.audit);
      ++meas;
      if (meas % snap_every == 0) {
        result.snapshots.push_back(take_snapshot(
            static_cast<double>(meas) / n, truth, plan, predict_fn,
            min_entry(nodes)));
      }
    }
  }
  if (meas % snap_every != 0) {
    result.snapshots.push_back(take_snapshot(static_cast<double>(meas) / n, truth,
                                             plan, predict_fn, min_entry(nodes)));
  }

  result.coords.reserve(n);
  for (NodeState& s : nodes) result.coords.push_back(std::move(s.coord));
  result.probe_lists = lists;
  result.eval_pairs = plan.eval_pairs;
  return result;
}

}  // namespace

SimResult run_active(const SimConfig& cfg, const PartialMatrix& truth) {
  return run_probing(cfg, truth, Mode::Active);
}

SimResult run_landmark(const SimConfig& cfg, const PartialMatrix& truth) {
  return run_probing(cfg, truth, Mode::Landmark);
}

SimResult run_vivaldi(const SimConfig& cfg, const PartialMatrix& truth) {
  validate_common(cfg, truth);
  const int n = truth.size();
  Rng rng(cfg.seed);

  std::vector<EuclideanCoord> coords(n);
  for (EuclideanCoord& c : coords) {
    c.x.resize(cfg.update.rank);
    for (double& v : c.x) v = rng.next_double();
    if (cfg.vivaldi_height) c.height = 0.0;
  }

  const auto pools = active_pools(truth);
  const auto lists = sample_lists(pools, cfg.k, rng);
  const EvalPlan plan = build_eval_plan(truth, lists);

  const auto predict_fn = [&](int i, int j) {
    return euclidean_predict(coords[i], coords[j]);
  };

  SimResult result;
  const std::uint64_t snap_every =
      cfg.snapshot_every > 0 ? cfg.snapshot_every : static_cast<std::uint64_t>(n);
  std::uint64_t meas = 0;

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  for (int round = 0; round < cfg.rounds; ++round) {
    rng.shuffle(order);
    for (int i : order) {
      const auto& list = lists[i];
      const int t = list[rng.next_index(list.size())];
      coords[i] = vivaldi_step(coords[i], coords[t], truth.distance(i, t),
                               cfg.vivaldi_eta, rng);
      ++meas;
      if (meas % snap_every == 0) {
        result.snapshots.push_back(take_snapshot(static_cast<double>(meas) / n, truth,
                                                 plan, predict_fn, min_entry(coords)));
      }
    }
  }
  if (meas % snap_every != 0) {
    result.snapshots.push_back(take_snapshot(static_cast<double>(meas) / n, truth,
                                             plan, predict_fn, min_entry(coords)));
  }

  result.eucl_coords = std::move(coords);
  result.probe_lists = lists;
  result.eval_pairs = plan.eval_pairs;
  return result;
}

SimResult run_passive(const SimConfig& cfg, const TraceDataset& trace) {
  if (cfg.update.rank < 1) throw std::invalid_argument("rank must be at least 1");
  SimResult result;
  if (trace.n < 1) return result;

  const int n = trace.n;
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const MeasurementEvent& e : trace.events) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n || e.src == e.dst) {
      throw std::invalid_argument("trace event ids out of range");
    }
    if (e.t_ms < prev_t) throw std::invalid_argument("trace is not sorted by time");
    prev_t = e.t_ms;
  }
  Rng rng(cfg.seed);
  const double window_s = cfg.passive_window_ms / 1000.0;

  std::vector<NodeState> nodes;
  nodes.reserve(n);
  for (int i = 0; i < n; ++i) {
    NodeState s = make_node(i, cfg.update.rank, Mode::Passive, rng,
                            cfg.distance_model == DistanceModel::HeightSymmetric);
    s.neighbors.window = window_s;
    nodes.push_back(std::move(s));
  }

  const PartialMatrix truth = ground_truth(trace);
  EvalPlan plan;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && truth.measured(i, j) && truth.distance(i, j) > 0.0) {
        plan.eval_pairs.emplace_back(i, j);
      }
    }
  }
  plan.train_pairs = plan.eval_pairs;

  const auto predict_fn = [&](int i, int j) {
    return predict(cfg.distance_model, nodes[i].coord, nodes[j].coord);
  };

  const std::uint64_t snap_every =
      cfg.snapshot_every > 0
          ? cfg.snapshot_every
          : std::max<std::uint64_t>(1, trace.events.size() / 100);

  // Per-pair event windows for the median filter; spent events are pruned as
  // the replay advances.
  std::vector<std::vector<MeasurementEvent>> buffers(static_cast<std::size_t>(n) * n);
  std::uint64_t meas = 0;

  for (const MeasurementEvent& e : trace.events) {
    auto& buf = buffers[static_cast<std::size_t>(e.src) * n + e.dst];
    buf.push_back(e);
    while (!buf.empty() && buf.front().t_ms <= e.t_ms - cfg.passive_window_ms) {
      buf.erase(buf.begin());
    }
    const std::optional<double> filtered =
        median_filter(buf, cfg.passive_window_ms, e.t_ms);
    if (!filtered) continue;  // cannot happen: the event itself is in window
    on_contact(nodes[e.src], e.dst, *filtered, *filtered, nodes[e.dst].coord.x,
               nodes[e.dst].coord.y, e.t_ms / 1000.0, cfg.update, &result.audit);
    ++meas;
    if (meas % snap_every == 0) {
      result.snapshots.push_back(take_snapshot(static_cast<double>(meas) / n, truth,
                                               plan, predict_fn, min_entry(nodes)));
    }
  }
  if (meas % snap_every != 0) {
    result.snapshots.push_back(take_snapshot(static_cast<double>(meas) / n, truth,
                                             plan, predict_fn, min_entry(nodes)));
  }

  result.coords.reserve(n);
  for (NodeState& s : nodes) result.coords.push_back(std::move(s.coord));
  result.eval_pairs = plan.eval_pairs;
  return result;
}

}  // namespace dmf
