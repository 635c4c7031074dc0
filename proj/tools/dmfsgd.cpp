// Experiment front-end: run simulations, analyze datasets, and emit CSV for
// external plotting. Diagnostics go to stderr, controlled by DMF_LOG.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmf/data.hpp"
#include "dmf/kernels.hpp"
#include "dmf/log.hpp"
#include "dmf/metrics.hpp"
#include "dmf/report.hpp"
#include "dmf/sim.hpp"

namespace {

struct CommonFlags {
  std::string dataset;
  std::string out;
  int rank = 10;
  double lambda = 1.0;
  std::string loss = "l1";
  bool nonneg = true;
  int k = 32;
  std::uint64_t seed = 0;
  int rounds = 320;
  std::uint64_t snapshot_every = 0;
  double eta = 0.0;  // 0: pick the default for the loss kind
  int max_line_search = 20;
  double delta = 1e-4;
  std::string distance = "raw";
  double window_ms = 1'800'000.0;
};

dmf::LossKind parse_loss(const std::string& s) {
  return s == "l2" ? dmf::LossKind::L2 : dmf::LossKind::L1;
}

dmf::DistanceModel parse_distance(const std::string& s) {
  if (s == "symmetric") return dmf::DistanceModel::Symmetric;
  if (s == "height-symmetric") return dmf::DistanceModel::HeightSymmetric;
  return dmf::DistanceModel::Raw;
}

dmf::SimConfig to_sim_config(const CommonFlags& f) {
  dmf::SimConfig cfg;
  cfg.update = dmf::UpdateConfig::with_loss(parse_loss(f.loss));
  cfg.update.rank = f.rank;
  cfg.update.lambda = f.lambda;
  cfg.update.nonneg = f.nonneg;
  if (f.eta > 0.0) cfg.update.eta_init = f.eta;
  cfg.update.max_line_search = f.max_line_search;
  cfg.update.delta = f.delta;
  cfg.k = f.k;
  cfg.seed = f.seed;
  cfg.rounds = f.rounds;
  cfg.snapshot_every = f.snapshot_every;
  cfg.distance_model = parse_distance(f.distance);
  cfg.passive_window_ms = f.window_ms;
  return cfg;
}

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool with_update_flags) {
  cmd->add_option("--dataset", f.dataset, "Input dataset path")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "Output file (default: stdout)");
  if (!with_update_flags) return;
  cmd->add_option("--rank,-r", f.rank, "Coordinate rank r")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--lambda", f.lambda, "Regularization coefficient")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--loss", f.loss, "Loss function")
      ->check(CLI::IsMember({"l1", "l2"}))
      ->capture_default_str();
  cmd->add_flag("--nonneg,!--no-nonneg", f.nonneg, "Clamp coordinates to >= 0")
      ->capture_default_str();
  cmd->add_option("--k", f.k, "Neighbors per node")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Simulation seed")->capture_default_str();
  cmd->add_option("--rounds", f.rounds, "Probe rounds (active/landmark)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--snapshot-every", f.snapshot_every,
                  "Measurements between snapshots (0: auto)")
      ->capture_default_str();
  cmd->add_option("--eta", f.eta, "Initial learning rate (0: default for loss)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--max-line-search", f.max_line_search, "Line search trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--delta", f.delta, "Relative line-search slack")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--distance", f.distance, "Distance function for predictions")
      ->check(CLI::IsMember({"raw", "symmetric", "height-symmetric"}))
      ->capture_default_str();
  cmd->add_option("--window-ms", f.window_ms, "Passive filter/retention window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

// Writes text to --out or stdout. The file stream is opened in binary mode so
// line endings stay LF everywhere.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

std::vector<int> pick_landmarks(int n, int count, std::uint64_t seed) {
  if (count > n) throw std::runtime_error("more landmarks than nodes");
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  dmf::Rng rng(seed ^ 0x6c616e646d61726bULL);
  std::vector<int> picked = rng.sample_without_replacement(all, count);
  std::sort(picked.begin(), picked.end());
  return picked;
}

int cmd_run(const CommonFlags& flags, const std::string& mode,
            const std::vector<int>& landmark_ids, int landmark_count) {
  dmf::SimConfig cfg = to_sim_config(flags);
  dmf::SimResult result;
  if (mode == "passive") {
    cfg.mode = dmf::Mode::Passive;
    const dmf::TraceDataset trace = dmf::load_trace(flags.dataset);
    dmf::log_info("trace: n=" + std::to_string(trace.n) + " events=" +
                  std::to_string(trace.events.size()));
    result = dmf::run_passive(cfg, trace);
  } else {
    const dmf::PartialMatrix truth = dmf::load_matrix(flags.dataset);
    if (mode == "landmark") {
      cfg.mode = dmf::Mode::Landmark;
      cfg.landmarks = landmark_ids.empty()
                          ? pick_landmarks(truth.size(), landmark_count, cfg.seed)
                          : landmark_ids;
      result = dmf::run_landmark(cfg, truth);
    } else {
      result = dmf::run_active(cfg, truth);
    }
  }
  dmf::log_info("line search: accepted=" + std::to_string(result.audit.accepted) +
                " skipped=" + std::to_string(result.audit.skipped));
  std::ostringstream csv;
  dmf::write_run_csv(result, csv);
  emit(flags.out, csv.str());
  return 0;
}

int cmd_analyze(const CommonFlags& flags) {
  const dmf::PartialMatrix m = dmf::load_matrix(flags.dataset);
  std::ostringstream out;
  out << "n," << m.size() << "\n";
  out << "density," << dmf::format_number(dmf::density(m)) << "\n";
  out << "tiv_ratio," << dmf::format_number(dmf::tiv_ratio(m)) << "\n";
  emit(flags.out, out.str());
  return 0;
}

int cmd_svd_profile(const CommonFlags& flags, int count) {
  const dmf::PartialMatrix m = dmf::load_matrix(flags.dataset);
  const std::vector<double> profile = dmf::singular_profile(m, count);
  std::ostringstream out;
  out << "index,sigma_normalized\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out << (i + 1) << ',' << dmf::format_number(profile[i]) << "\n";
  }
  emit(flags.out, out.str());
  return 0;
}

int cmd_compare(const CommonFlags& flags, int landmark_count, double vivaldi_eta,
                bool vivaldi_height) {
  const dmf::PartialMatrix truth = dmf::load_matrix(flags.dataset);
  dmf::SimConfig cfg = to_sim_config(flags);
  cfg.vivaldi_eta = vivaldi_eta;
  cfg.vivaldi_height = vivaldi_height;

  const dmf::SimResult dmfsgd = dmf::run_active(cfg, truth);
  const dmf::SimResult vivaldi = dmf::run_vivaldi(cfg, truth);

  dmf::SimConfig lm_cfg = cfg;
  lm_cfg.mode = dmf::Mode::Landmark;
  lm_cfg.landmarks = pick_landmarks(truth.size(), landmark_count, cfg.seed);
  const dmf::SimResult landmark = dmf::run_landmark(lm_cfg, truth);

  std::ostringstream csv;
  dmf::write_compare_csv(dmfsgd, vivaldi, landmark, csv);
  emit(flags.out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized matrix factorization for network distance prediction"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string run_mode = "active";
  std::vector<int> run_landmarks;
  int run_landmark_count = 32;
  CLI::App* run = app.add_subcommand("run", "Run one simulation and emit snapshot CSV");
  add_common_flags(run, run_flags, true);
  run->add_option("--mode", run_mode, "Probing mode")
      ->check(CLI::IsMember({"active", "passive", "landmark"}))
      ->capture_default_str();
  run->add_option("--landmarks", run_landmarks, "Explicit landmark ids");
  run->add_option("--landmark-count", run_landmark_count,
                  "Randomly picked landmarks when --landmarks is absent")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CommonFlags analyze_flags;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Report node count, density, and TIV ratio");
  add_common_flags(analyze, analyze_flags, false);

  CommonFlags svd_flags;
  int svd_count = 20;
  CLI::App* svd = app.add_subcommand(
      "svd-profile", "Emit normalized singular values of a complete matrix");
  add_common_flags(svd, svd_flags, false);
  svd->add_option("--count", svd_count, "Singular values to report")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CommonFlags compare_flags;
  int compare_landmark_count = 32;
  double vivaldi_eta = 0.05;
  bool vivaldi_height = false;
  CLI::App* compare = app.add_subcommand(
      "compare", "DMFSGD vs Vivaldi vs landmark-restricted DMFSGD, same budget");
  add_common_flags(compare, compare_flags, true);
  compare->add_option("--landmark-count", compare_landmark_count, "Landmarks to pick")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compare->add_option("--vivaldi-eta", vivaldi_eta, "Constant Vivaldi step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compare->add_flag("--vivaldi-height", vivaldi_height, "Height-augmented Vivaldi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  dmf::log_info(std::string("kernel backend: ") +
                std::string(dmf::kernels::backend_name(dmf::kernels::active_backend())));

  try {
    if (run->parsed()) {
      return cmd_run(run_flags, run_mode, run_landmarks, run_landmark_count);
    }
    if (analyze->parsed()) return cmd_analyze(analyze_flags);
    if (svd->parsed()) return cmd_svd_profile(svd_flags, svd_count);
    if (compare->parsed()) {
      return cmd_compare(compare_flags, compare_landmark_count, vivaldi_eta,
                         vivaldi_height);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
