#include "dmf/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dmf/metrics.hpp"

namespace dmf {
namespace {

std::string snapshot_percentile(const Snapshot& s, double q) {
  if (s.ree.empty()) return "nan";
  return format_number(quantile(s.ree, q));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  (void)ec;
  return std::string(buf, ptr);
}

void write_run_csv(const SimResult& result, std::ostream& out) {
  out << "measurements_per_node,stress,mae,ree_p50,ree_p90\n";
  for (const Snapshot& s : result.snapshots) {
    out << format_number(s.measurements_per_node) << ',' << format_number(s.stress)
        << ',' << format_number(s.mae) << ',' << snapshot_percentile(s, 0.5) << ','
        << snapshot_percentile(s, 0.9) << '\n';
  }
}

void write_compare_csv(const SimResult& dmfsgd, const SimResult& vivaldi,
                       const SimResult& landmark, std::ostream& out) {
  const std::size_t rows = dmfsgd.snapshots.size();
  if (vivaldi.snapshots.size() != rows || landmark.snapshots.size() != rows) {
    throw std::invalid_argument("compared runs produced different snapshot counts");
  }
  out << "measurements_per_node,dmfsgd_stress,dmfsgd_mae,vivaldi_stress,vivaldi_mae,"
         "landmark_stress,landmark_mae\n";
  for (std::size_t r = 0; r < rows; ++r) {
    const Snapshot& a = dmfsgd.snapshots[r];
    const Snapshot& b = vivaldi.snapshots[r];
    const Snapshot& c = landmark.snapshots[r];
    out << format_number(a.measurements_per_node) << ',' << format_number(a.stress)
        << ',' << format_number(a.mae) << ',' << format_number(b.stress) << ','
        << format_number(b.mae) << ',' << format_number(c.stress) << ','
        << format_number(c.mae) << '\n';
  }
}

}  // namespace dmf
