#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spikegrad/matrix.hpp"
#include "spikegrad/neuron.hpp"
#include "spikegrad/raster.hpp"

namespace spikegrad {

// Architecture and training hyperparameters. Defaults are the published
// MNIST settings (784-500-150-10, T = 100, tau = 50, theta = 15, ...).
struct NetworkConfig {
  std::vector<std::size_t> layer_sizes = {784, 500, 150, 10};
  double theta = 15.0;
  std::size_t tau = 50;
  std::size_t sim_steps = 100;  // simulation window T
  double alpha = 1.9;
  double mu = 0.00033;
  double beta = 2.0;
  double epsilon = 1e-5;
  std::size_t batch_size = 50;
  std::uint64_t seed = 1;
  double rate_scale = 0.25;
  double weight_init_stddev = 1.0;

  void validate() const;

  double gain() const noexcept { return 1.0 / theta; }
  std::size_t windows() const noexcept { return sim_steps / tau; }
  std::size_t weight_layers() const noexcept { return layer_sizes.size() - 1; }
  std::size_t inputs() const noexcept { return layer_sizes.front(); }
  std::size_t outputs() const noexcept { return layer_sizes.back(); }
  neuron::NeuronParams neuron_params() const { return {theta, tau, 0.0}; }
};

// Previous-iteration quantities consumed by the fractional gradient: the
// presynaptic window rates and the postsynaptic surrogate errors.
struct LayerCache {
  std::vector<double> s_hat_pre;
  std::vector<double> xi;
};

// Weights feeding one layer: rows are postsynaptic neurons, columns
// presynaptic ones.
struct LayerSynapses {
  Matrix w_current;
  Matrix w_previous;
  LayerCache cache;
  bool has_cache = false;
};

struct SynapseStore {
  std::vector<LayerSynapses> layers;  // layers[l] feeds layer l + 1
  std::size_t updates_applied = 0;
};

// Everything observed while simulating one sample.
struct ForwardRecord {
  // rasters[0] is the input raster; rasters[l] the spikes of layer l.
  std::vector<SpikeRaster> rasters;
  // stats[window][layer][neuron]; the input layer carries u_hat = 0.
  std::vector<std::vector<std::vector<neuron::WindowStats>>> stats;
  // Spike counts per window, same indexing as `stats`.
  std::vector<std::vector<std::vector<std::uint32_t>>> counts;

  std::size_t windows() const noexcept { return stats.size(); }
  std::vector<double> s_hat(std::size_t window, std::size_t layer) const;
  bool spiked(std::size_t window, std::size_t layer, std::size_t neuron) const {
    return counts[window][layer][neuron] > 0;
  }
  const SpikeRaster& output() const { return rasters.back(); }
};

// Called once per layer per step with the potentials reached in that step
// (before any reset) and the emitted spikes. `t` is 1-based.
using MembraneProbe = std::function<void(std::size_t t, std::size_t layer,
                                         std::span<const double> potentials,
                                         std::span<const std::uint8_t> spikes)>;

// Standard-normal (scaled) weights from a stream seeded by config.seed;
// w_previous starts equal to w_current and caches start empty.
SynapseStore init_network(const NetworkConfig& config);

// Simulates every layer for T steps. Membrane state starts at rest. Each layer
// only accumulates the columns of presynaptic neurons that spiked this step.
ForwardRecord forward_sample(const SynapseStore& store, const SpikeRaster& input,
                             const NetworkConfig& config, const MembraneProbe* probe = nullptr);

// Output-layer surrogate error: -2 gain beta (r - s_hat), gated by whether the
// neuron spiked in the window.
double xi_output(double r, double s_hat, bool spiked_in_window, const NetworkConfig& config);

// Hidden-layer surrogate error: gain * <upstream_xi, upstream weight column>,
// gated the same way.
double xi_hidden(std::span<const double> upstream_xi, std::span<const double> upstream_weights,
                 bool spiked_in_window, const NetworkConfig& config);

// xi * s_hat_pre / Gamma(2 - alpha) * |w_now - w_prev + epsilon|^(1 - alpha).
// Exactly zero when xi or s_hat_pre is zero.
double fractional_gradient(double xi, double s_hat_pre_prev, double w_now, double w_prev,
                           const NetworkConfig& config);

struct WindowGradients {
  std::vector<Matrix> gradients;  // one per weight layer, weight-shaped
  std::vector<LayerCache> used;   // caches the gradients were computed from
  std::vector<bool> bootstrap;    // integer-order first step for that layer
};

// Surrogate errors for every non-input layer of one window, computed from the
// window's spikes and the current weights. xi[l] belongs to layer l + 1.
std::vector<std::vector<double>> window_xi(const SynapseStore& store, const ForwardRecord& record,
                                           std::span<const double> teaching, std::size_t window,
                                           const NetworkConfig& config);

// Fractional loss gradients for one window from the cached previous-iteration
// rates and errors, then refreshes the caches with this window's values. A
// layer without a cache bootstraps from the current window with unit
// fractional coefficient.
WindowGradients backward_window(SynapseStore& store, const ForwardRecord& record,
                                std::span<const double> teaching, std::size_t window,
                                const NetworkConfig& config);

// w_previous <- w_current, then w_current -= mu * gradient.
void apply_update(SynapseStore& store, const std::vector<Matrix>& gradients,
                  const NetworkConfig& config);

// Largest row L1 norm of each weight layer, for monitoring the homeostasis
// condition ||w_i||_1 < theta.
std::vector<double> max_row_l1(const SynapseStore& store);

// Deterministic rate network used to check the backprop chain by finite
// differences: u_hat = W s_hat_in, s_hat = activation(u_hat, b).
struct SurrogateForward {
  std::vector<std::vector<double>> u_hat;  // u_hat[l] for layer l + 1
  std::vector<std::vector<double>> rates;  // rates[0] = input rates
};

SurrogateForward rate_surrogate_forward(const SynapseStore& store,
                                        std::span<const double> input_rates,
                                        const std::vector<std::vector<double>>& b_offsets,
                                        const NetworkConfig& config);

double rate_surrogate_loss(const SurrogateForward& fwd, std::span<const double> teaching,
                           const NetworkConfig& config);

// dL/dW for every weight layer by the integer-order chain rule.
std::vector<Matrix> rate_surrogate_backprop(const SynapseStore& store, const SurrogateForward& fwd,
                                            std::span<const double> teaching,
                                            const NetworkConfig& config);

}  // namespace spikegrad
