#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmf/model.hpp"

namespace dmf {

struct MeasurementEvent {
  double t_ms = 0.0;
  int src = -1;
  int dst = -1;
  double rtt_ms = 0.0;
};

/// Timestamped measurements sorted by t_ms; node ids live in [0, n).
struct TraceDataset {
  std::vector<MeasurementEvent> events;
  int n = 0;
};

/// Parse failure carrying the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Matrix file format: line 1 holds n, followed by n rows of n
/// whitespace-separated millisecond values; -1 marks an unmeasured entry.
/// The mask is set exactly where a finite nonnegative value was parsed, with
/// the diagonal forced to unmeasured. Any other negative value is an error.
PartialMatrix load_matrix(const std::filesystem::path& path);

/// Canonical writer for the same format: shortest round-trip number tokens,
/// single spaces, LF endings, -1 wherever the mask is 0 (diagonal included).
/// save(load(f)) is byte-identical for files produced by save.
void save_matrix(const PartialMatrix& m, const std::filesystem::path& path);
std::string matrix_to_string(const PartialMatrix& m);

/// Trace file format: CSV with header `t_ms,src,dst,rtt_ms`, rows sorted by
/// t_ms (ties allowed). Unsorted input is rejected.
TraceDataset load_trace(const std::filesystem::path& path);

/// Median of the rtt samples falling in (now - window, now], given the events
/// of one pair sorted by time. Returns nullopt when the window holds nothing
/// (the pair counts as unmeasured right now). Even counts take the mean of
/// the middle two.
std::optional<double> median_filter(std::span<const MeasurementEvent> pair_events,
                                    double window_ms, double now_ms);

/// Static matrix extracted from a trace: entry (i,j) is the median of every
/// rtt observed for that directed pair; pairs with no events stay unmeasured.
PartialMatrix ground_truth(const TraceDataset& trace);

/// Fraction of measured edges AB for which some C with AC and BC measured
/// satisfies d_AB > d_BC + d_AC. Expects a matrix that is symmetric on its
/// measured support; an edge counts as measured when both directions are.
double tiv_ratio(const PartialMatrix& m);

/// Top `count` singular values of a complete matrix (diagonal taken as 0),
/// each divided by the largest one. Throws if some off-diagonal entry is
/// unmeasured; extract a complete submatrix first.
std::vector<double> singular_profile(const PartialMatrix& m, int count);

/// Measured fraction of the off-diagonal entries.
double density(const PartialMatrix& m);

bool is_complete(const PartialMatrix& m);

}  // namespace dmf
