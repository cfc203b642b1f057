#pragma once

#include <cstddef>

#include "spikegrad/data.hpp"
#include "spikegrad/encoding.hpp"
#include "spikegrad/metrics.hpp"
#include "spikegrad/network.hpp"

namespace spikegrad {

struct TrainOptions {
  std::size_t epochs = 1;
  // Evaluate on `test` every this many iterations (batches); 0 disables.
  std::size_t eval_every = 0;
  const data::Dataset* test = nullptr;
  // Fill wall_ms with elapsed time. Off by default so that metrics output is
  // reproducible byte for byte.
  bool record_wall_time = false;
};

struct UpdateEvent {
  std::size_t epoch;
  std::size_t position;      // position within the epoch's shuffled order
  std::size_t sample_index;  // dataset index
  std::size_t window;
  double window_loss;
  const ForwardRecord& record;  // forward pass of the current sample
  const SynapseStore& store;  // after the update; w_previous holds the pre-update weights
  const WindowGradients& gradients;
};

class TrainObserver {
 public:
  virtual ~TrainObserver() = default;
  virtual void on_update(const UpdateEvent& /*event*/) {}
  virtual void on_row(const metrics::MetricsRow& /*row*/) {}
};

struct SampleOutcome {
  double loss = 0.0;  // mean over windows
  std::size_t predicted = 0;
};

// Deterministic encoding of one dataset sample; `purpose` separates the
// training and evaluation streams.
SpikeRaster encode_sample(const data::Dataset& dataset, std::size_t index, std::size_t epoch,
                          StreamPurpose purpose, const NetworkConfig& config);

// Forward pass, then one backward/update per window in order.
SampleOutcome train_sample(SynapseStore& store, const SpikeRaster& input, std::size_t label,
                           const NetworkConfig& config);

// Sequential per-sample training over shuffled epochs. A metrics row is
// emitted every batch_size samples (and for a trailing partial batch).
// Throws DivergenceError carrying the iteration on a non-finite loss.
metrics::RunMetrics train(SynapseStore& store, const data::Dataset& dataset,
                          const NetworkConfig& config, const TrainOptions& options,
                          TrainObserver* observer = nullptr);

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
  std::size_t samples = 0;
};

// Forward passes only; weights untouched.
EvalResult evaluate(const SynapseStore& store, const data::Dataset& dataset,
                    const NetworkConfig& config);

// Loss of one window of a forward record.
double window_loss(const ForwardRecord& record, const encoding::TeachingSignal& target,
                   std::size_t window, const NetworkConfig& config);

}  // namespace spikegrad
