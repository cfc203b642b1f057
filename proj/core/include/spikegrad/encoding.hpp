#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spikegrad/raster.hpp"
#include "spikegrad/rng.hpp"

namespace spikegrad::encoding {

// One-hot rate target for the output layer.
struct TeachingSignal {
  std::vector<double> r;
  std::size_t target = 0;
};

// Bernoulli-per-step rate coding: entry (i, t) spikes with probability
// pixels[i] * rate_scale, independently. Pixels must lie in [0, 1].
SpikeRaster poisson_encode(std::span<const double> pixels, std::size_t steps, double rate_scale,
                           RandomStream& stream);

TeachingSignal teaching_signal(std::size_t label, std::size_t n_out);

// beta * sum_i (r_i - s_hat_i)^2
double loss(const TeachingSignal& r, std::span<const double> s_hat_out, double beta);

// Output neuron with the largest total spike count; ties go to the lowest
// index, so an all-silent raster classifies as 0.
std::size_t classify(const SpikeRaster& output_raster);

// Same decision rule on precomputed counts.
std::size_t argmax_count(std::span<const std::size_t> counts);

}  // namespace spikegrad::encoding
