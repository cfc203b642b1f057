#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace spikegrad {

// Binary spike matrix for one layer over one simulation window, shaped
// neurons x steps. Storage is step-major so the spikes of one time step are
// contiguous.
class SpikeRaster {
 public:
  SpikeRaster() = default;
  SpikeRaster(std::size_t neurons, std::size_t steps)
      : neurons_(neurons), steps_(steps), bits_(neurons * steps, 0) {}

  std::size_t neurons() const noexcept { return neurons_; }
  std::size_t steps() const noexcept { return steps_; }
  bool empty() const noexcept { return bits_.empty(); }

  // t is a 0-based step index.
  bool at(std::size_t neuron, std::size_t t) const { return bits_[t * neurons_ + neuron] != 0; }
  void set(std::size_t neuron, std::size_t t, bool spike) {
    bits_[t * neurons_ + neuron] = spike ? 1 : 0;
  }

  std::span<const std::uint8_t> step(std::size_t t) const {
    return {bits_.data() + t * neurons_, neurons_};
  }
  std::span<std::uint8_t> step(std::size_t t) { return {bits_.data() + t * neurons_, neurons_}; }

  // Spikes of `neuron` over steps [t_begin, t_end).
  std::size_t count(std::size_t neuron, std::size_t t_begin, std::size_t t_end) const {
    std::size_t c = 0;
    for (std::size_t t = t_begin; t < t_end; ++t) c += bits_[t * neurons_ + neuron];
    return c;
  }
  std::size_t count(std::size_t neuron) const { return count(neuron, 0, steps_); }

  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> out(neurons_, 0);
    for (std::size_t t = 0; t < steps_; ++t) {
      const std::uint8_t* row = bits_.data() + t * neurons_;
      for (std::size_t i = 0; i < neurons_; ++i) out[i] += row[i];
    }
    return out;
  }

  std::size_t total() const {
    std::size_t c = 0;
    for (std::uint8_t b : bits_) c += b;
    return c;
  }

  friend bool operator==(const SpikeRaster&, const SpikeRaster&) = default;

 private:
  std::size_t neurons_ = 0;
  std::size_t steps_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace spikegrad
