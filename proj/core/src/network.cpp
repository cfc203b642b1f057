#include "spikegrad/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "spikegrad/error.hpp"
#include "spikegrad/fracgrad.hpp"
#include "spikegrad/rng.hpp"

namespace spikegrad {

void NetworkConfig::validate() const {
  if (layer_sizes.size() < 2) {
    throw ConfigError("layer_sizes needs at least an input and an output layer");
  }
  for (std::size_t n : layer_sizes) {
    if (n == 0) throw ConfigError("layer_sizes must not contain an empty layer");
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("theta must be positive");
  if (tau < 2) throw ConfigError("tau must exceed 1");
  if (sim_steps < tau) throw ConfigError("tau must not exceed the simulation window");
  if (sim_steps % tau != 0) {
    throw ConfigError("simulation window must be a multiple of tau");
  }
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("alpha must lie in (0, 2)");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be finite and >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be finite and >= 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(rate_scale > 0.0 && rate_scale <= 1.0)) {
    throw ConfigError("rate_scale must lie in (0, 1]");
  }
  if (!(weight_init_stddev >= 0.0) || !std::isfinite(weight_init_stddev)) {
    throw ConfigError("weight_init_stddev must be finite and >= 0");
  }
}

std::vector<double> ForwardRecord::s_hat(std::size_t window, std::size_t layer) const {
  const auto& layer_stats = stats.at(window).at(layer);
  std::vector<double> out(layer_stats.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = layer_stats[i].s_hat;
  return out;
}

SynapseStore init_network(const NetworkConfig& config) {
  config.validate();
  SynapseStore store;
  RandomStream stream = make_stream(config.seed, {tag(StreamPurpose::kWeightInit)});
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t l = 0; l + 1 < config.layer_sizes.size(); ++l) {
    LayerSynapses layer;
    layer.w_current = Matrix(config.layer_sizes[l + 1], config.layer_sizes[l]);
    if (config.weight_init_stddev > 0.0) {
      for (double& w : layer.w_current.data()) w = config.weight_init_stddev * normal(stream);
    }
    layer.w_previous = layer.w_current;
    store.layers.push_back(std::move(layer));
  }
  return store;
}

ForwardRecord forward_sample(const SynapseStore& store, const SpikeRaster& input,
                             const NetworkConfig& config, const MembraneProbe* probe) {
  const std::size_t n_layers = config.layer_sizes.size();
  if (store.layers.size() + 1 != n_layers) {
    throw ShapeError("forward_sample: store depth differs from the configured layer count");
  }
  if (input.neurons() != config.inputs() || input.steps() != config.sim_steps) {
    throw ShapeError("forward_sample: input raster must be " + std::to_string(config.inputs()) +
                     " x " + std::to_string(config.sim_steps));
  }
  for (std::size_t l = 0; l + 1 < n_layers; ++l) {
    const Matrix& w = store.layers[l].w_current;
    if (w.rows() != config.layer_sizes[l + 1] || w.cols() != config.layer_sizes[l]) {
      throw ShapeError("forward_sample: weight layer " + std::to_string(l) + " has wrong shape");
    }
  }

  const neuron::NeuronParams params = config.neuron_params();
  const std::size_t steps = config.sim_steps;
  const std::size_t tau = config.tau;

  ForwardRecord rec;
  rec.rasters.reserve(n_layers);
  rec.rasters.push_back(input);
  std::vector<neuron::LayerState> states;
  std::vector<std::vector<double>> drive(n_layers);
  for (std::size_t l = 1; l < n_layers; ++l) {
    rec.rasters.emplace_back(config.layer_sizes[l], steps);
    states.emplace_back(config.layer_sizes[l], params);
    drive[l].assign(config.layer_sizes[l], 0.0);
  }

  std::vector<std::size_t> active;
  active.reserve(*std::max_element(config.layer_sizes.begin(), config.layer_sizes.end()));

  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t l = 1; l < n_layers; ++l) {
      const std::span<const std::uint8_t> pre = rec.rasters[l - 1].step(t);
      active.clear();
      for (std::size_t j = 0; j < pre.size(); ++j) {
        if (pre[j]) active.push_back(j);
      }
      const Matrix& w = store.layers[l - 1].w_current;
      std::vector<double>& in = drive[l];
      for (std::size_t i = 0; i < in.size(); ++i) {
        const std::span<const double> row = w.row(i);
        double acc = 0.0;
        for (std::size_t j : active) acc += row[j];
        in[i] = acc;
      }
      const std::span<std::uint8_t> out = rec.rasters[l].step(t);
      states[l - 1].step(in, out);
      if (probe && *probe) (*probe)(t + 1, l, states[l - 1].last_candidates(), out);
    }

    if ((t + 1) % tau == 0) {
      const std::size_t begin = t + 1 - tau;
      std::vector<std::vector<neuron::WindowStats>> wstats(n_layers);
      std::vector<std::vector<std::uint32_t>> wcounts(n_layers);
      wstats[0].resize(config.inputs());
      wcounts[0].resize(config.inputs());
      for (std::size_t j = 0; j < config.inputs(); ++j) {
        const std::size_t c = input.count(j, begin, t + 1);
        wcounts[0][j] = static_cast<std::uint32_t>(c);
        wstats[0][j] = {static_cast<double>(c) / static_cast<double>(tau), 0.0};
      }
      for (std::size_t l = 1; l < n_layers; ++l) {
        const std::size_t n = config.layer_sizes[l];
        wstats[l].resize(n);
        wcounts[l].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          wstats[l][i] = states[l - 1].window_stats(i);
          wcounts[l][i] = static_cast<std::uint32_t>(rec.rasters[l].count(i, begin, t + 1));
        }
      }
      rec.stats.push_back(std::move(wstats));
      rec.counts.push_back(std::move(wcounts));
    }
  }
  return rec;
}

double xi_output(double r, double s_hat, bool spiked_in_window, const NetworkConfig& config) {
  if (!spiked_in_window) return 0.0;
  return -2.0 * config.gain() * config.beta * (r - s_hat);
}

double xi_hidden(std::span<const double> upstream_xi, std::span<const double> upstream_weights,
                 bool spiked_in_window, const NetworkConfig& config) {
  if (upstream_xi.size() != upstream_weights.size()) {
    throw ShapeError("xi_hidden: upstream error and weight vectors differ in length");
  }
  if (!spiked_in_window) return 0.0;
  double acc = 0.0;
  for (std::size_t h = 0; h < upstream_xi.size(); ++h) acc += upstream_xi[h] * upstream_weights[h];
  return config.gain() * acc;
}

double fractional_gradient(double xi, double s_hat_pre_prev, double w_now, double w_prev,
                           const NetworkConfig& config) {
  const double hebbian = xi * s_hat_pre_prev;
  if (hebbian == 0.0) return 0.0;
  return hebbian * fracgrad::fractional_coefficient(w_now - w_prev, config.alpha, config.epsilon);
}

std::vector<std::vector<double>> window_xi(const SynapseStore& store, const ForwardRecord& record,
                                           std::span<const double> teaching, std::size_t window,
                                           const NetworkConfig& config) {
  const std::size_t n_weight = config.weight_layers();
  if (teaching.size() != config.outputs()) {
    throw ShapeError("teaching signal length " + std::to_string(teaching.size()) +
                     " differs from output width " + std::to_string(config.outputs()));
  }
  if (window >= record.windows()) throw ShapeError("window index out of range");

  std::vector<std::vector<double>> xi(n_weight);
  const std::size_t out_layer = n_weight;
  xi[n_weight - 1].resize(config.outputs());
  for (std::size_t i = 0; i < config.outputs(); ++i) {
    xi[n_weight - 1][i] = xi_output(teaching[i], record.stats[window][out_layer][i].s_hat,
                                    record.spiked(window, out_layer, i), config);
  }
  for (std::size_t l = n_weight - 1; l-- > 0;) {
    const Matrix& upstream = store.layers[l + 1].w_current;
    const std::size_t n = config.layer_sizes[l + 1];
    xi[l].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool spiked = record.spiked(window, l + 1, i);
      xi[l][i] = spiked ? xi_hidden(xi[l + 1], upstream.column(i), true, config) : 0.0;
    }
  }
  return xi;
}

WindowGradients backward_window(SynapseStore& store, const ForwardRecord& record,
                                std::span<const double> teaching, std::size_t window,
                                const NetworkConfig& config) {
  std::vector<std::vector<double>> fresh_xi = window_xi(store, record, teaching, window, config);
  const fracgrad::FractionalCoefficient coefficient(config.alpha, config.epsilon);

  WindowGradients out;
  const std::size_t n_weight = config.weight_layers();
  out.gradients.reserve(n_weight);
  for (std::size_t l = 0; l < n_weight; ++l) {
    LayerSynapses& layer = store.layers[l];
    LayerCache fresh{record.s_hat(window, l), std::move(fresh_xi[l])};
    const bool bootstrap = !layer.has_cache;
    if (bootstrap) layer.cache = fresh;

    const LayerCache& cache = layer.cache;
    Matrix grad(layer.w_current.rows(), layer.w_current.cols());
    for (std::size_t i = 0; i < grad.rows(); ++i) {
      const double xi = cache.xi[i];
      if (xi == 0.0) continue;
      const std::span<const double> w_now = layer.w_current.row(i);
      const std::span<const double> w_prev = layer.w_previous.row(i);
      const std::span<double> g = grad.row(i);
      for (std::size_t j = 0; j < grad.cols(); ++j) {
        const double hebbian = xi * cache.s_hat_pre[j];
        if (hebbian == 0.0) continue;
        g[j] = bootstrap ? hebbian : hebbian * coefficient(w_now[j] - w_prev[j]);
      }
    }
    out.gradients.push_back(std::move(grad));
    out.used.push_back(cache);
    out.bootstrap.push_back(bootstrap);
    layer.cache = std::move(fresh);
    layer.has_cache = true;
  }
  return out;
}

void apply_update(SynapseStore& store, const std::vector<Matrix>& gradients,
                  const NetworkConfig& config) {
  if (gradients.size() != store.layers.size()) {
    throw ShapeError("apply_update: gradient layer count differs from the store");
  }
  for (std::size_t l = 0; l < gradients.size(); ++l) {
    if (!gradients[l].same_shape(store.layers[l].w_current)) {
      throw ShapeError("apply_update: gradient shape differs from weight layer " +
                       std::to_string(l));
    }
  }
  for (std::size_t l = 0; l < gradients.size(); ++l) {
    LayerSynapses& layer = store.layers[l];
    layer.w_previous = layer.w_current;
    const std::span<double> w = layer.w_current.data();
    const std::span<const double> g = gradients[l].data();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= config.mu * g[k];
  }
  ++store.updates_applied;
}

std::vector<double> max_row_l1(const SynapseStore& store) {
  std::vector<double> out;
  for (const LayerSynapses& layer : store.layers) {
    double best = 0.0;
    for (std::size_t i = 0; i < layer.w_current.rows(); ++i) {
      double s = 0.0;
      for (double w : layer.w_current.row(i)) s += std::abs(w);
      best = std::max(best, s);
    }
    out.push_back(best);
  }
  return out;
}

SurrogateForward rate_surrogate_forward(const SynapseStore& store,
                                        std::span<const double> input_rates,
                                        const std::vector<std::vector<double>>& b_offsets,
                                        const NetworkConfig& config) {
  const std::size_t n_weight = store.layers.size();
  if (input_rates.size() != config.inputs() || n_weight != config.weight_layers()) {
    throw ShapeError("rate_surrogate_forward: input width or depth mismatch");
  }
  if (!b_offsets.empty() && b_offsets.size() != n_weight) {
    throw ShapeError("rate_surrogate_forward: need one offset vector per non-input layer");
  }
  const neuron::NeuronParams params = config.neuron_params();
  SurrogateForward fwd;
  fwd.rates.emplace_back(input_rates.begin(), input_rates.end());
  for (std::size_t l = 0; l < n_weight; ++l) {
    const Matrix& w = store.layers[l].w_current;
    const std::vector<double>& in = fwd.rates.back();
    if (w.cols() != in.size()) throw ShapeError("rate_surrogate_forward: weight shape mismatch");
    if (!b_offsets.empty() && b_offsets[l].size() != w.rows()) {
      throw ShapeError("rate_surrogate_forward: offset vector length mismatch");
    }
    std::vector<double> u(w.rows(), 0.0);
    std::vector<double> s(w.rows(), 0.0);
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const std::span<const double> row = w.row(i);
      double acc = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * in[j];
      u[i] = acc;
      s[i] = neuron::activation(acc, b_offsets.empty() ? 0.0 : b_offsets[l][i], params);
    }
    fwd.u_hat.push_back(std::move(u));
    fwd.rates.push_back(std::move(s));
  }
  return fwd;
}

double rate_surrogate_loss(const SurrogateForward& fwd, std::span<const double> teaching,
                           const NetworkConfig& config) {
  const std::vector<double>& out = fwd.rates.back();
  if (teaching.size() != out.size()) throw ShapeError("rate_surrogate_loss: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = teaching[i] - out[i];
    sum += d * d;
  }
  return config.beta * sum;
}

std::vector<Matrix> rate_surrogate_backprop(const SynapseStore& store, const SurrogateForward& fwd,
                                            std::span<const double> teaching,
                                            const NetworkConfig& config) {
  const std::size_t n_weight = store.layers.size();
  const neuron::NeuronParams params = config.neuron_params();
  const std::vector<double>& out = fwd.rates.back();
  if (teaching.size() != out.size()) throw ShapeError("rate_surrogate_backprop: length mismatch");

  // dL/ds for the current layer, starting at the output.
  std::vector<double> d_rate(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) d_rate[i] = -2.0 * config.beta * (teaching[i] - out[i]);

  std::vector<Matrix> grads(n_weight);
  for (std::size_t l = n_weight; l-- > 0;) {
    const Matrix& w = store.layers[l].w_current;
    const std::vector<double>& u = fwd.u_hat[l];
    const std::vector<double>& in = fwd.rates[l];
    std::vector<double> d_u(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) d_u[i] = d_rate[i] * neuron::activation_slope(u[i], params);

    Matrix g(w.rows(), w.cols());
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) g(i, j) = d_u[i] * in[j];
    }
    grads[l] = std::move(g);

    std::vector<double> d_prev(w.cols(), 0.0);
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) d_prev[j] += d_u[i] * w(i, j);
    }
    d_rate = std::move(d_prev);
  }
  return grads;
}

}  // namespace spikegrad
