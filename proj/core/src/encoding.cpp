#include "spikegrad/encoding.hpp"

#include <random>
#include <string>

#include "spikegrad/error.hpp"

namespace spikegrad::encoding {

SpikeRaster poisson_encode(std::span<const double> pixels, std::size_t steps, double rate_scale,
                           RandomStream& stream) {
  if (!(rate_scale > 0.0 && rate_scale <= 1.0)) {
    throw DomainError("poisson_encode: rate_scale must lie in (0, 1]");
  }
  for (double p : pixels) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("poisson_encode: pixel outside [0, 1]");
  }
  SpikeRaster raster(pixels.size(), steps);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double p = pixels[i] * rate_scale;
    if (p == 0.0) continue;
    for (std::size_t t = 0; t < steps; ++t) raster.set(i, t, unit(stream) < p);
  }
  return raster;
}

TeachingSignal teaching_signal(std::size_t label, std::size_t n_out) {
  if (label >= n_out) {
    throw DomainError("teaching_signal: label " + std::to_string(label) + " not below " +
                      std::to_string(n_out));
  }
  TeachingSignal sig;
  sig.r.assign(n_out, 0.0);
  sig.r[label] = 1.0;
  sig.target = label;
  return sig;
}

double loss(const TeachingSignal& r, std::span<const double> s_hat_out, double beta) {
  if (r.r.size() != s_hat_out.size()) {
    throw ShapeError("loss: teaching signal and output rates differ in length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < s_hat_out.size(); ++i) {
    const double d = r.r[i] - s_hat_out[i];
    sum += d * d;
  }
  return beta * sum;
}

std::size_t argmax_count(std::span<const std::size_t> counts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  return best;
}

std::size_t classify(const SpikeRaster& output_raster) {
  const std::vector<std::size_t> counts = output_raster.counts();
  return argmax_count(counts);
}

}  // namespace spikegrad::encoding
