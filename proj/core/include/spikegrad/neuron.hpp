#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spikegrad/error.hpp"

// Discrete-time nonleaky integrate-and-fire dynamics and the windowed
// firing-rate / membrane-potential averages built on top of them.
namespace spikegrad::neuron {

struct NeuronParams {
  double theta = 15.0;     // threshold voltage
  std::size_t tau = 50;    // averaging window, in steps
  double u_rest = 0.0;     // fixed

  double gain() const noexcept { return 1.0 / theta; }
  // Smallest temporal-average potential of a neuron that fired in the window.
  double activation_threshold() const noexcept { return theta / static_cast<double>(tau); }

  void validate() const;
};

struct StepResult {
  double u_next;
  bool spiked;
  double fire_potential;  // pre-reset potential when spiked, else 0
};

// One integration step. The candidate potential is clamped at rest; reaching
// theta (inclusive) fires and resets.
inline StepResult integrate_step(double u, double weighted_input, const NeuronParams& params) {
  if (!std::isfinite(u) || !std::isfinite(weighted_input)) {
    throw NumericError("integrate_step: non-finite membrane potential or input");
  }
  if (u < params.u_rest) throw DomainError("integrate_step: potential below rest");
  double candidate = u + weighted_input;
  if (candidate < params.u_rest) candidate = params.u_rest;
  if (candidate >= params.theta) return {params.u_rest, true, candidate};
  return {candidate, false, 0.0};
}

struct WindowStats {
  double s_hat = 0.0;  // spikes in window / tau
  double u_hat = 0.0;  // sum of fire potentials in window / tau
};

// Membrane potentials of one layer plus the last `tau` steps of spike and
// fire-potential history per neuron (ring buffers).
class LayerState {
 public:
  LayerState(std::size_t neurons, const NeuronParams& params);

  std::size_t size() const noexcept { return u_.size(); }
  std::size_t steps_simulated() const noexcept { return steps_; }
  const NeuronParams& params() const noexcept { return params_; }

  std::span<const double> potentials() const noexcept { return u_; }
  // Potentials reached during the last step, before any reset.
  std::span<const double> last_candidates() const noexcept { return candidates_; }

  // Integrates one step for every neuron and writes the resulting spikes.
  void step(std::span<const double> weighted_inputs, std::span<std::uint8_t> spikes_out);

  // Events inside the trailing window, oldest first.
  std::vector<bool> spike_history(std::size_t neuron) const;
  std::vector<double> fire_potentials(std::size_t neuron) const;

  WindowStats window_stats(std::size_t neuron) const;

  // Zero potentials and clear histories.
  void reset();

 private:
  NeuronParams params_;
  std::vector<double> u_;
  std::vector<double> candidates_;
  std::vector<std::uint8_t> spike_ring_;  // [slot * n + neuron]
  std::vector<double> fire_ring_;         // 0 where no spike
  std::size_t head_ = 0;                  // slot written by the next step
  std::size_t steps_ = 0;
};

// Throws StateError unless at least tau steps have been simulated.
WindowStats window_stats(const LayerState& state, std::size_t neuron_index,
                         const NeuronParams& params);

// Piecewise-linear rate/potential relation: gain * (u_hat - b) once u_hat
// reaches theta / tau, zero below. Requires 0 <= b < theta.
double activation(double u_hat, double b, const NeuronParams& params);

// Derivative of `activation` with respect to u_hat (away from the kink).
double activation_slope(double u_hat, const NeuronParams& params) noexcept;

}  // namespace spikegrad::neuron
