#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spikegrad::metrics {

struct MetricsRow {
  std::size_t iteration = 0;  // 1-based batch counter
  std::size_t epoch = 0;      // 0-based
  double batch_loss = 0.0;
  double batch_accuracy = 0.0;
  std::optional<double> test_accuracy;
  double wall_ms = 0.0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

struct RunMetrics {
  std::vector<MetricsRow> rows;

  // Throws StateError if the row breaks iteration ordering or accuracy bounds.
  void append(const MetricsRow& row);
};

inline constexpr const char* kCsvHeader =
    "iteration,epoch,batch_loss,batch_accuracy,test_accuracy,wall_ms";

// Header plus one row per record; reals with 17 significant digits, empty
// field for a missing test accuracy, LF line endings.
void emit_csv(const RunMetrics& metrics, std::ostream& sink);
std::string format_real(double v);

RunMetrics parse_csv(std::istream& source);

struct ComplexityModel {
  std::size_t l = 0;  // input neurons
  std::size_t m = 0;  // hidden neurons
  std::size_t n = 0;  // output neurons
};

// Per-epoch cost of the two feedforward and two feedback passes:
// l*m + m*n + n*m + m*l.
std::size_t epoch_complexity(const ComplexityModel& model);

struct CostResult {
  double cost = 0.0;
  // Per requested level (input order): 1-based epoch of first f(x) <= level.
  std::vector<std::optional<std::size_t>> attainment;
  std::size_t unreached = 0;
};

// Mean first-attainment epoch over the reachable error levels, times the
// per-epoch complexity. Epochs are 1-based; attainment means error <= level.
// Throws ComputationError when no level is reached.
CostResult computational_cost(std::span<const double> error_trajectory,
                              std::span<const double> err_levels, double complexity);

}  // namespace spikegrad::metrics
