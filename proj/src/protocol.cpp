#include "dmf/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmf {

std::vector<double> decay_weights(const NeighborSet& set, double now) {
  const std::size_t n = set.records.size();
  if (n == 0) throw std::invalid_argument("decay_weights needs a nonempty neighbor set");
  std::vector<double> ages(n);
  double a_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ages[i] = std::max(0.0, set.records[i].age(now));
    a_max = std::max(a_max, ages[i]);
  }
  double denom = 0.0;
  for (double a : ages) denom += a_max - a;
  std::vector<double> w(n);
  if (denom <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
    return w;
  }
  for (std::size_t i = 0; i < n; ++i) w[i] = (a_max - ages[i]) / denom;
  return w;
}

NodeState make_node(int id, int rank, Mode mode, Rng& rng, bool with_height) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
  NodeState s;
  s.node_id = id;
  s.mode = mode;
  s.coord.x.resize(rank);
  s.coord.y.resize(rank);
  for (double& v : s.coord.x) v = rng.next_double();
  for (double& v : s.coord.y) v = rng.next_double();
  if (with_height) s.coord.height = 0.0;
  return s;
}

namespace {

NeighborRecord* find_record(NeighborSet& set, int id) {
  for (NeighborRecord& r : set.records) {
    if (r.node_id == id) return &r;
  }
  return nullptr;
}

void apply_retention(NodeState& state, double now) {
  auto& records = state.neighbors.records;
  if (state.mode == Mode::Passive) {
    std::erase_if(records, [&](const NeighborRecord& r) {
      return r.age(now) > state.neighbors.window;
    });
    return;
  }
  while (static_cast<int>(records.size()) > state.neighbors.capacity) {
    auto oldest = std::min_element(
        records.begin(), records.end(),
        [](const NeighborRecord& a, const NeighborRecord& b) {
          return a.refreshed_at < b.refreshed_at;
        });
    records.erase(oldest);
  }
}

}  // namespace

void on_contact(NodeState& state, int j, double d_ij, double d_ji,
                std::span<const double> xj, std::span<const double> yj, double now,
                const UpdateConfig& cfg, LineSearchAudit* audit) {
  if (j == state.node_id) throw std::invalid_argument("node cannot contact itself");
  if (!std::isfinite(d_ij) || !std::isfinite(d_ji) || d_ij < 0.0 || d_ji < 0.0) {
    throw std::invalid_argument("measurements must be finite and nonnegative");
  }
  const std::size_t rank = state.coord.x.size();
  if (xj.size() != rank || yj.size() != rank) {
    throw std::invalid_argument("contacted neighbor has a different rank");
  }

  // Stale records (e.g. after a rank change) are dropped and re-learned.
  std::erase_if(state.neighbors.records, [&](const NeighborRecord& r) {
    return r.xj.size() != rank || r.yj.size() != rank;
  });

  NeighborRecord* rec = find_record(state.neighbors, j);
  if (rec == nullptr) {
    state.neighbors.records.push_back(NeighborRecord{});
    rec = &state.neighbors.records.back();
    rec->node_id = j;
  }
  rec->d_ij = d_ij;
  rec->d_ji = d_ji;
  rec->xj.assign(xj.begin(), xj.end());
  rec->yj.assign(yj.begin(), yj.end());
  rec->refreshed_at = now;

  apply_retention(state, now);

  const auto& records = state.neighbors.records;
  std::vector<double> weights;
  if (state.mode == Mode::Passive) {
    weights = decay_weights(state.neighbors, now);
  } else {
    weights.assign(records.size(), 1.0);
  }

  std::vector<NeighborSample> sx(records.size());
  std::vector<NeighborSample> sy(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    sx[r] = NeighborSample{records[r].d_ij, records[r].yj, weights[r]};
    sy[r] = NeighborSample{records[r].d_ji, records[r].xj, weights[r]};
  }

  auto lsx = line_search(
      state.coord.x,
      [&](std::span<const double> c) { return local_loss(cfg.loss, c, sx, cfg.lambda); },
      [&](double eta) { return coord_update(state.coord.x, sx, eta, cfg); }, cfg, audit);
  state.coord.x = std::move(lsx.coord);

  auto lsy = line_search(
      state.coord.y,
      [&](std::span<const double> c) { return local_loss(cfg.loss, c, sy, cfg.lambda); },
      [&](double eta) { return coord_update(state.coord.y, sy, eta, cfg); }, cfg, audit);
  state.coord.y = std::move(lsy.coord);
}

int select_probe_target(const NodeState& state, Rng& rng, std::span<const int> landmarks) {
  if (state.mode == Mode::Passive) {
    throw std::invalid_argument("passive nodes never probe");
  }
  if (!state.probe_list.empty()) {
    return state.probe_list[rng.next_index(state.probe_list.size())];
  }
  if (state.mode == Mode::Landmark) {
    std::vector<int> candidates;
    candidates.reserve(landmarks.size());
    for (int lm : landmarks) {
      if (lm != state.node_id) candidates.push_back(lm);
    }
    if (candidates.empty()) throw std::invalid_argument("no probe candidates");
    return candidates[rng.next_index(candidates.size())];
  }
  throw std::invalid_argument("active node has no probe list");
}

}  // namespace dmf
