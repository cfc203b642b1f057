#include "spikegrad/neuron.hpp"

#include <algorithm>
#include <string>

namespace spikegrad::neuron {

void NeuronParams::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw ConfigError("threshold theta must be positive");
  }
  if (tau < 2) throw ConfigError("averaging window tau must exceed 1");
  if (u_rest != 0.0) throw ConfigError("resting potential is fixed at 0");
}

LayerState::LayerState(std::size_t neurons, const NeuronParams& params)
    : params_(params),
      u_(neurons, params.u_rest),
      candidates_(neurons, params.u_rest),
      spike_ring_(neurons * params.tau, 0),
      fire_ring_(neurons * params.tau, 0.0) {
  params_.validate();
}

void LayerState::step(std::span<const double> weighted_inputs,
                      std::span<std::uint8_t> spikes_out) {
  const std::size_t n = u_.size();
  if (weighted_inputs.size() != n || spikes_out.size() != n) {
    throw ShapeError("LayerState::step: input/output width differs from layer size");
  }
  std::uint8_t* spike_slot = spike_ring_.data() + head_ * n;
  double* fire_slot = fire_ring_.data() + head_ * n;
  for (std::size_t i = 0; i < n; ++i) {
    const StepResult r = integrate_step(u_[i], weighted_inputs[i], params_);
    candidates_[i] = r.spiked ? r.fire_potential : r.u_next;
    u_[i] = r.u_next;
    spikes_out[i] = r.spiked ? 1 : 0;
    spike_slot[i] = spikes_out[i];
    fire_slot[i] = r.fire_potential;
  }
  head_ = (head_ + 1) % params_.tau;
  ++steps_;
}

std::vector<bool> LayerState::spike_history(std::size_t neuron) const {
  const std::size_t n = u_.size();
  const std::size_t len = std::min(steps_, params_.tau);
  std::vector<bool> out;
  out.reserve(len);
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t slot = (head_ + params_.tau - len + k) % params_.tau;
    out.push_back(spike_ring_[slot * n + neuron] != 0);
  }
  return out;
}

std::vector<double> LayerState::fire_potentials(std::size_t neuron) const {
  const std::size_t n = u_.size();
  const std::size_t len = std::min(steps_, params_.tau);
  std::vector<double> out;
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t slot = (head_ + params_.tau - len + k) % params_.tau;
    if (spike_ring_[slot * n + neuron]) out.push_back(fire_ring_[slot * n + neuron]);
  }
  return out;
}

WindowStats LayerState::window_stats(std::size_t neuron) const {
  if (steps_ < params_.tau) {
    throw StateError("window_stats: only " + std::to_string(steps_) + " of " +
                     std::to_string(params_.tau) + " window steps simulated");
  }
  if (neuron >= u_.size()) throw ShapeError("window_stats: neuron index out of range");
  const std::size_t n = u_.size();
  std::size_t count = 0;
  double potential_sum = 0.0;
  for (std::size_t slot = 0; slot < params_.tau; ++slot) {
    count += spike_ring_[slot * n + neuron];
    potential_sum += fire_ring_[slot * n + neuron];
  }
  const double tau = static_cast<double>(params_.tau);
  return {static_cast<double>(count) / tau, potential_sum / tau};
}

void LayerState::reset() {
  std::fill(u_.begin(), u_.end(), params_.u_rest);
  std::fill(candidates_.begin(), candidates_.end(), params_.u_rest);
  std::fill(spike_ring_.begin(), spike_ring_.end(), 0);
  std::fill(fire_ring_.begin(), fire_ring_.end(), 0.0);
  head_ = 0;
  steps_ = 0;
}

WindowStats window_stats(const LayerState& state, std::size_t neuron_index,
                         const NeuronParams& params) {
  if (params.tau != state.params().tau || params.theta != state.params().theta) {
    throw ConfigError("window_stats: parameters differ from those the state was built with");
  }
  return state.window_stats(neuron_index);
}

double activation(double u_hat, double b, const NeuronParams& params) {
  if (!(b >= 0.0 && b < params.theta)) {
    throw DomainError("activation: offset b must lie in [0, theta)");
  }
  if (u_hat >= params.activation_threshold()) return params.gain() * (u_hat - b);
  return 0.0;
}

double activation_slope(double u_hat, const NeuronParams& params) noexcept {
  return u_hat >= params.activation_threshold() ? params.gain() : 0.0;
}

}  // namespace spikegrad::neuron
