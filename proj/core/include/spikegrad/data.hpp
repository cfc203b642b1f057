#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace spikegrad::data {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct IdxImages {
  std::size_t count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols, row-major per image

  std::size_t image_size() const noexcept { return rows * cols; }
};

// Parses an IDX3 unsigned-byte image file (optionally gzip-compressed).
// Throws FormatError naming the offending field.
IdxImages load_idx_images(const std::filesystem::path& path);
IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);

// Parses an IDX1 label file; every label must be a digit 0-9.
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

// Reads a whole file, inflating it when it starts with the gzip magic 1f 8b.
std::vector<std::uint8_t> read_maybe_gzip(const std::filesystem::path& path);

inline double normalize_pixel(std::uint8_t byte) noexcept { return byte / 255.0; }
std::uint8_t denormalize_pixel(double value) noexcept;

// Immutable labelled image set; pixels are kept as bytes and normalized on
// access.
class Dataset {
 public:
  Dataset() = default;
  Dataset(IdxImages images, std::vector<std::uint8_t> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t image_size() const noexcept { return image_size_; }

  std::span<const std::uint8_t> image_bytes(std::size_t i) const {
    return {bytes_.data() + i * image_size_, image_size_};
  }
  std::vector<double> image(std::size_t i) const;
  std::size_t label(std::size_t i) const { return labels_[i]; }

  // First `limit` samples (all when limit is 0 or exceeds the size).
  Dataset prefix(std::size_t limit) const;

 private:
  std::size_t image_size_ = 0;
  std::vector<std::uint8_t> bytes_;
  std::vector<std::uint8_t> labels_;
};

enum class Split { kTrain, kTest };

// Loads the standard MNIST file pair from `dir`, accepting either the plain
// or the `.gz` file names. `limit` of 0 keeps every sample.
Dataset load_mnist(const std::filesystem::path& dir, Split split, std::size_t limit = 0);

// Deterministic permutation of [0, count) as a function of (seed, epoch).
std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed,
                                          std::size_t epoch);

}  // namespace spikegrad::data
