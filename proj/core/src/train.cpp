#include "spikegrad/train.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "spikegrad/error.hpp"
#include "spikegrad/rng.hpp"

namespace spikegrad {
namespace {

struct SampleContext {
  std::size_t epoch = 0;
  std::size_t position = 0;
  std::size_t sample_index = 0;
  TrainObserver* observer = nullptr;
};

SampleOutcome run_sample(SynapseStore& store, const SpikeRaster& input, std::size_t label,
                         const NetworkConfig& config, const SampleContext& ctx) {
  const ForwardRecord record = forward_sample(store, input, config);
  const encoding::TeachingSignal target = encoding::teaching_signal(label, config.outputs());
  SampleOutcome out;
  for (std::size_t w = 0; w < record.windows(); ++w) {
    const double l = window_loss(record, target, w, config);
    out.loss += l;
    const WindowGradients grads = backward_window(store, record, target.r, w, config);
    apply_update(store, grads.gradients, config);
    if (ctx.observer) {
      ctx.observer->on_update({ctx.epoch, ctx.position, ctx.sample_index, w, l, record, store, grads});
    }
  }
  out.loss /= static_cast<double>(record.windows());
  out.predicted = encoding::classify(record.output());
  return out;
}

}  // namespace

SpikeRaster encode_sample(const data::Dataset& dataset, std::size_t index, std::size_t epoch,
                          StreamPurpose purpose, const NetworkConfig& config) {
  RandomStream stream = make_stream(config.seed, {tag(purpose), epoch, index});
  return encoding::poisson_encode(dataset.image(index), config.sim_steps, config.rate_scale,
                                  stream);
}

double window_loss(const ForwardRecord& record, const encoding::TeachingSignal& target,
                   std::size_t window, const NetworkConfig& config) {
  return encoding::loss(target, record.s_hat(window, record.rasters.size() - 1), config.beta);
}

SampleOutcome train_sample(SynapseStore& store, const SpikeRaster& input, std::size_t label,
                           const NetworkConfig& config) {
  return run_sample(store, input, label, config, {});
}

metrics::RunMetrics train(SynapseStore& store, const data::Dataset& dataset,
                          const NetworkConfig& config, const TrainOptions& options,
                          TrainObserver* observer) {
  config.validate();
  if (dataset.empty()) throw ConfigError("train: dataset is empty");
  if (options.epochs == 0) throw ConfigError("train: epochs must be at least 1");
  if (dataset.image_size() != config.inputs()) {
    throw ShapeError("train: image size " + std::to_string(dataset.image_size()) +
                     " differs from input width " + std::to_string(config.inputs()));
  }

  const auto start = std::chrono::steady_clock::now();
  metrics::RunMetrics run;
  std::size_t iteration = 0;
  double batch_loss = 0.0;
  std::size_t batch_correct = 0;
  std::size_t batch_count = 0;

  auto flush = [&](std::size_t epoch) {
    ++iteration;
    metrics::MetricsRow row;
    row.iteration = iteration;
    row.epoch = epoch;
    row.batch_loss = batch_loss / static_cast<double>(batch_count);
    row.batch_accuracy = static_cast<double>(batch_correct) / static_cast<double>(batch_count);
    if (options.test && options.eval_every > 0 && iteration % options.eval_every == 0) {
      row.test_accuracy = evaluate(store, *options.test, config).accuracy;
    }
    if (options.record_wall_time) {
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start)
                        .count();
    }
    run.append(row);
    if (observer) observer->on_row(row);
    batch_loss = 0.0;
    batch_correct = 0;
    batch_count = 0;
  };

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    const std::vector<std::size_t> order = data::shuffled_indices(dataset.size(), config.seed, epoch);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const std::size_t idx = order[pos];
      const SpikeRaster input =
          encode_sample(dataset, idx, epoch, StreamPurpose::kTrainEncoding, config);
      SampleOutcome outcome;
      try {
        outcome = run_sample(store, input, dataset.label(idx), config,
                             {epoch, pos, idx, observer});
      } catch (const NumericError& e) {
        throw DivergenceError(std::string("training diverged: ") + e.what() + " (iteration " +
                                  std::to_string(iteration + 1) + ")",
                              iteration + 1);
      }
      if (!std::isfinite(outcome.loss)) {
        throw DivergenceError("training diverged: non-finite loss at iteration " +
                                  std::to_string(iteration + 1),
                              iteration + 1);
      }
      batch_loss += outcome.loss;
      batch_correct += outcome.predicted == dataset.label(idx) ? 1 : 0;
      ++batch_count;
      if (batch_count == config.batch_size) flush(epoch);
    }
    if (batch_count > 0) flush(epoch);
  }
  return run;
}

EvalResult evaluate(const SynapseStore& store, const data::Dataset& dataset,
                    const NetworkConfig& config) {
  EvalResult res;
  if (dataset.empty()) return res;
  std::size_t correct = 0;
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const SpikeRaster input = encode_sample(dataset, i, 0, StreamPurpose::kTestEncoding, config);
    const ForwardRecord record = forward_sample(store, input, config);
    const encoding::TeachingSignal target = encoding::teaching_signal(dataset.label(i), config.outputs());
    double l = 0.0;
    for (std::size_t w = 0; w < record.windows(); ++w) l += window_loss(record, target, w, config);
    loss_sum += l / static_cast<double>(record.windows());
    correct += encoding::classify(record.output()) == dataset.label(i) ? 1 : 0;
  }
  res.samples = dataset.size();
  res.accuracy = static_cast<double>(correct) / static_cast<double>(res.samples);
  res.mean_loss = loss_sum / static_cast<double>(res.samples);
  return res;
}

}  // namespace spikegrad
