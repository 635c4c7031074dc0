#include "dmf/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include "dmf/baselines.hpp"
#include "dmf/metrics.hpp"

namespace dmf {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_char(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

double parse_double(std::string_view tok, const std::string& file, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(file, line, "not a number: '" + std::string(tok) + "'");
  }
  return v;
}

long parse_long(std::string_view tok, const std::string& file, std::size_t line) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(file, line, "not an integer: '" + std::string(tok) + "'");
  }
  return v;
}

std::string format_shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + message), line_(line) {}

PartialMatrix load_matrix(const std::filesystem::path& path) {
  const std::string file = path.string();
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty() || split_ws(lines[0]).size() != 1) {
    throw ParseError(file, 1, "expected the node count on the first line");
  }
  const long n = parse_long(split_ws(lines[0])[0], file, 1);
  if (n < 1) throw ParseError(file, 1, "node count must be positive");

  PartialMatrix m(static_cast<int>(n));
  for (long i = 0; i < n; ++i) {
    const std::size_t lineno = static_cast<std::size_t>(i) + 2;
    if (lineno > lines.size()) {
      throw ParseError(file, lines.size(), "expected " + std::to_string(n) + " rows");
    }
    const auto toks = split_ws(lines[lineno - 1]);
    if (toks.size() != static_cast<std::size_t>(n)) {
      throw ParseError(file, lineno,
                       "expected " + std::to_string(n) + " values, got " +
                           std::to_string(toks.size()));
    }
    for (long j = 0; j < n; ++j) {
      const double v = parse_double(toks[j], file, lineno);
      if (v == -1.0) continue;  // unmeasured sentinel
      if (!std::isfinite(v) || v < 0.0) {
        throw ParseError(file, lineno, "negative or non-finite distance");
      }
      if (i != j) m.set(static_cast<int>(i), static_cast<int>(j), v);
    }
  }
  for (std::size_t extra = static_cast<std::size_t>(n) + 1; extra < lines.size(); ++extra) {
    if (!split_ws(lines[extra]).empty()) {
      throw ParseError(file, extra + 1, "unexpected content after the last row");
    }
  }
  return m;
}

std::string matrix_to_string(const PartialMatrix& m) {
  std::string out = std::to_string(m.size());
  out += '\n';
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (j > 0) out += ' ';
      out += m.measured(i, j) ? format_shortest(m.distance(i, j)) : "-1";
    }
    out += '\n';
  }
  return out;
}

void save_matrix(const PartialMatrix& m, const std::filesystem::path& path) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write " + path.string());
  outf << matrix_to_string(m);
}

TraceDataset load_trace(const std::filesystem::path& path) {
  const std::string file = path.string();
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "t_ms,src,dst,rtt_ms") {
    throw ParseError(file, 1, "expected header 't_ms,src,dst,rtt_ms'");
  }
  TraceDataset trace;
  double prev_t = -std::numeric_limits<double>::infinity();
  long max_id = -1;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const std::size_t lineno = li + 1;
    const auto toks = split_char(lines[li], ',');
    if (toks.size() != 4) throw ParseError(file, lineno, "expected 4 fields");
    MeasurementEvent e;
    e.t_ms = parse_double(toks[0], file, lineno);
    const long src = parse_long(toks[1], file, lineno);
    const long dst = parse_long(toks[2], file, lineno);
    e.rtt_ms = parse_double(toks[3], file, lineno);
    if (src < 0 || dst < 0) throw ParseError(file, lineno, "node ids must be nonnegative");
    if (src == dst) throw ParseError(file, lineno, "src and dst must differ");
    if (!std::isfinite(e.rtt_ms) || e.rtt_ms < 0.0) {
      throw ParseError(file, lineno, "rtt must be finite and nonnegative");
    }
    if (!std::isfinite(e.t_ms)) throw ParseError(file, lineno, "timestamp must be finite");
    if (e.t_ms < prev_t) throw ParseError(file, lineno, "rows are not sorted by t_ms");
    prev_t = e.t_ms;
    e.src = static_cast<int>(src);
    e.dst = static_cast<int>(dst);
    max_id = std::max({max_id, src, dst});
    trace.events.push_back(e);
  }
  trace.n = static_cast<int>(max_id + 1);
  return trace;
}

std::optional<double> median_filter(std::span<const MeasurementEvent> pair_events,
                                    double window_ms, double now_ms) {
  std::vector<double> in_window;
  for (const MeasurementEvent& e : pair_events) {
    if (e.t_ms > now_ms - window_ms && e.t_ms <= now_ms) in_window.push_back(e.rtt_ms);
  }
  if (in_window.empty()) return std::nullopt;
  return median(std::move(in_window));
}

PartialMatrix ground_truth(const TraceDataset& trace) {
  if (trace.n < 1) return PartialMatrix{};
  std::vector<std::vector<double>> samples(
      static_cast<std::size_t>(trace.n) * static_cast<std::size_t>(trace.n));
  for (const MeasurementEvent& e : trace.events) {
    samples[static_cast<std::size_t>(e.src) * trace.n + e.dst].push_back(e.rtt_ms);
  }
  PartialMatrix m(trace.n);
  for (int i = 0; i < trace.n; ++i) {
    for (int j = 0; j < trace.n; ++j) {
      auto& s = samples[static_cast<std::size_t>(i) * trace.n + j];
      if (i == j || s.empty()) continue;
      m.set(i, j, median(std::move(s)));
    }
  }
  return m;
}

double tiv_ratio(const PartialMatrix& m) {
  const int n = m.size();
  const auto edge = [&](int i, int j) { return m.measured(i, j) && m.measured(j, i); };
  const auto dist = [&](int i, int j) { return (m.distance(i, j) + m.distance(j, i)) / 2.0; };

  std::size_t edges = 0;
  std::size_t violating = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!edge(i, j)) continue;
      ++edges;
      const double d_ij = dist(i, j);
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j || !edge(i, k) || !edge(j, k)) continue;
        if (d_ij > dist(i, k) + dist(j, k)) {
          ++violating;
          break;
        }
      }
    }
  }
  if (edges == 0) return 0.0;
  return static_cast<double>(violating) / static_cast<double>(edges);
}

bool is_complete(const PartialMatrix& m) {
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (i != j && !m.measured(i, j)) return false;
    }
  }
  return true;
}

double density(const PartialMatrix& m) {
  const std::size_t n = static_cast<std::size_t>(m.size());
  if (n < 2) return 0.0;
  return static_cast<double>(m.measured_count()) / static_cast<double>(n * (n - 1));
}

std::vector<double> singular_profile(const PartialMatrix& m, int count) {
  if (count < 1) throw std::invalid_argument("count must be positive");
  if (!is_complete(m)) {
    throw std::invalid_argument(
        "matrix has unmeasured entries; extract a complete submatrix first");
  }
  DenseMatrix dense(m.size(), m.size());
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      dense.at(i, j) = i == j ? 0.0 : m.distance(i, j);
    }
  }
  const std::vector<double> sv = singular_values(dense);
  if (sv.empty() || !(sv.front() > 0.0)) {
    throw std::invalid_argument("zero matrix has no normalizable spectrum");
  }
  std::vector<double> out;
  out.reserve(std::min<std::size_t>(sv.size(), static_cast<std::size_t>(count)));
  for (std::size_t i = 0; i < sv.size() && i < static_cast<std::size_t>(count); ++i) {
    out.push_back(sv[i] / sv.front());
  }
  return out;
}

}  // namespace dmf
