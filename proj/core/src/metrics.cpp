#include "spikegrad/metrics.hpp"

#include <fmt/format.h>

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "spikegrad/error.hpp"

namespace spikegrad::metrics {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw FormatError(fmt::format("metrics CSV line {}: bad number '{}'", line_no, s));
  }
  return v;
}

std::size_t parse_natural(const std::string& s, std::size_t line_no) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw FormatError(fmt::format("metrics CSV line {}: bad integer '{}'", line_no, s));
  }
  return v;
}

}  // namespace

void RunMetrics::append(const MetricsRow& row) {
  if (!rows.empty() && row.iteration <= rows.back().iteration) {
    throw StateError("metrics: iterations must be strictly increasing");
  }
  auto in_unit = [](double a) { return a >= 0.0 && a <= 1.0; };
  if (!in_unit(row.batch_accuracy) || (row.test_accuracy && !in_unit(*row.test_accuracy))) {
    throw StateError("metrics: accuracy outside [0, 1]");
  }
  rows.push_back(row);
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void emit_csv(const RunMetrics& metrics, std::ostream& sink) {
  sink << kCsvHeader << '\n';
  for (const MetricsRow& r : metrics.rows) {
    sink << r.iteration << ',' << r.epoch << ',' << format_real(r.batch_loss) << ','
         << format_real(r.batch_accuracy) << ','
         << (r.test_accuracy ? format_real(*r.test_accuracy) : std::string()) << ','
         << format_real(r.wall_ms) << '\n';
  }
  sink.flush();
  if (!sink) throw FormatError("metrics: write to sink failed");
}

RunMetrics parse_csv(std::istream& source) {
  std::string line;
  if (!std::getline(source, line)) throw FormatError("metrics CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw FormatError("metrics CSV: unexpected header '" + line + "'");
  RunMetrics m;
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 6) {
      throw FormatError(fmt::format("metrics CSV line {}: expected 6 fields, got {}", line_no,
                                    f.size()));
    }
    MetricsRow r;
    r.iteration = parse_natural(f[0], line_no);
    r.epoch = parse_natural(f[1], line_no);
    r.batch_loss = parse_real(f[2], line_no);
    r.batch_accuracy = parse_real(f[3], line_no);
    if (!f[4].empty()) r.test_accuracy = parse_real(f[4], line_no);
    r.wall_ms = parse_real(f[5], line_no);
    m.rows.push_back(r);
  }
  return m;
}

std::size_t epoch_complexity(const ComplexityModel& model) {
  const std::size_t l = model.l, m = model.m, n = model.n;
  return l * m + m * n + n * m + m * l;
}

CostResult computational_cost(std::span<const double> error_trajectory,
                              std::span<const double> err_levels, double complexity) {
  if (error_trajectory.empty()) throw ComputationError("computational cost: empty trajectory");
  if (err_levels.empty()) throw ComputationError("computational cost: no error levels given");
  CostResult res;
  double epoch_sum = 0.0;
  std::size_t reached = 0;
  for (double level : err_levels) {
    std::optional<std::size_t> first;
    for (std::size_t x = 0; x < error_trajectory.size(); ++x) {
      if (error_trajectory[x] <= level) {
        first = x + 1;
        break;
      }
    }
    res.attainment.push_back(first);
    if (first) {
      epoch_sum += static_cast<double>(*first);
      ++reached;
    } else {
      ++res.unreached;
    }
  }
  if (reached == 0) throw ComputationError("computational cost: no error level was ever reached");
  res.cost = epoch_sum / static_cast<double>(reached) * complexity;
  return res;
}

}  // namespace spikegrad::metrics
