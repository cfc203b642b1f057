#include "spikegrad/data.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "spikegrad/error.hpp"
#include "spikegrad/rng.hpp"

namespace spikegrad::data {
namespace {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t be32(const char* field) {
    if (bytes_.size() - pos_ < 4 || pos_ > bytes_.size()) {
      throw FormatError(std::string("IDX: short read at ") + field);
    }
    const std::uint32_t v = (std::uint32_t{bytes_[pos_]} << 24) |
                            (std::uint32_t{bytes_[pos_ + 1]} << 16) |
                            (std::uint32_t{bytes_[pos_ + 2]} << 8) | std::uint32_t{bytes_[pos_ + 3]};
    pos_ += 4;
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* field) {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(std::string("IDX: truncated ") + field + ": expected " +
                        std::to_string(n) + " bytes, found " + std::to_string(bytes_.size() - pos_));
    }
    const auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void check_magic(std::uint32_t got, std::uint32_t want) {
  if (got != want) {
    throw FormatError("IDX: wrong magic " + std::to_string(got) + " (expected " +
                      std::to_string(want) + ")");
  }
}

std::vector<std::uint8_t> inflate_gzip(const std::vector<std::uint8_t>& in) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw FormatError("gzip: inflateInit failed");
  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> chunk(1 << 16);
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk.data();
    zs.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw FormatError("gzip: corrupt or truncated stream");
    }
    out.insert(out.end(), chunk.data(), chunk.data() + (chunk.size() - zs.avail_out));
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw FormatError("gzip: truncated stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

std::filesystem::path find_file(const std::filesystem::path& dir, const std::string& stem) {
  for (const std::string& name : {stem, stem + ".gz"}) {
    const auto p = dir / name;
    if (std::filesystem::exists(p)) return p;
  }
  throw FormatError("MNIST file not found: " + (dir / stem).string() + "[.gz]");
}

}  // namespace

std::vector<std::uint8_t> read_maybe_gzip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) return inflate_gzip(bytes);
  return bytes;
}

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  check_magic(r.be32("magic"), kIdxImageMagic);
  IdxImages img;
  img.count = r.be32("item count");
  img.rows = r.be32("rows");
  img.cols = r.be32("cols");
  if (img.rows == 0 || img.cols == 0) throw FormatError("IDX: zero rows or cols");
  const auto payload = r.take(img.count * img.rows * img.cols, "pixel data");
  if (r.remaining() != 0) {
    throw FormatError("IDX: dimension mismatch, " + std::to_string(r.remaining()) +
                      " trailing bytes after pixel data");
  }
  img.pixels.assign(payload.begin(), payload.end());
  return img;
}

IdxImages load_idx_images(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_maybe_gzip(path);
  return parse_idx_images(bytes);
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  check_magic(r.be32("magic"), kIdxLabelMagic);
  const std::size_t count = r.be32("item count");
  const auto payload = r.take(count, "label data");
  if (r.remaining() != 0) {
    throw FormatError("IDX: dimension mismatch, " + std::to_string(r.remaining()) +
                      " trailing bytes after label data");
  }
  for (std::size_t i = 0; i < payload.size(); ++i) {
    if (payload[i] > 9) {
      throw FormatError("IDX: label " + std::to_string(payload[i]) + " at index " +
                        std::to_string(i) + " is not a digit");
    }
  }
  return {payload.begin(), payload.end()};
}

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_maybe_gzip(path);
  return parse_idx_labels(bytes);
}

std::uint8_t denormalize_pixel(double value) noexcept {
  return static_cast<std::uint8_t>(std::lround(std::clamp(value, 0.0, 1.0) * 255.0));
}

Dataset::Dataset(IdxImages images, std::vector<std::uint8_t> labels)
    : image_size_(images.image_size()), bytes_(std::move(images.pixels)), labels_(std::move(labels)) {
  if (images.count != labels_.size()) {
    throw FormatError("dataset: " + std::to_string(images.count) + " images but " +
                      std::to_string(labels_.size()) + " labels");
  }
}

std::vector<double> Dataset::image(std::size_t i) const {
  const auto bytes = image_bytes(i);
  std::vector<double> out(bytes.size());
  std::transform(bytes.begin(), bytes.end(), out.begin(), normalize_pixel);
  return out;
}

Dataset Dataset::prefix(std::size_t limit) const {
  if (limit == 0 || limit >= size()) return *this;
  Dataset d;
  d.image_size_ = image_size_;
  d.bytes_.assign(bytes_.begin(), bytes_.begin() + limit * image_size_);
  d.labels_.assign(labels_.begin(), labels_.begin() + limit);
  return d;
}

Dataset load_mnist(const std::filesystem::path& dir, Split split, std::size_t limit) {
  const bool train = split == Split::kTrain;
  IdxImages images = load_idx_images(find_file(dir, train ? "train-images-idx3-ubyte"
                                                          : "t10k-images-idx3-ubyte"));
  std::vector<std::uint8_t> labels =
      load_idx_labels(find_file(dir, train ? "train-labels-idx1-ubyte" : "t10k-labels-idx1-ubyte"));
  return Dataset(std::move(images), std::move(labels)).prefix(limit);
}

std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed,
                                          std::size_t epoch) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  RandomStream stream = make_stream(seed, {tag(StreamPurpose::kShuffle), epoch});
  std::shuffle(idx.begin(), idx.end(), stream);
  return idx;
}

}  // namespace spikegrad::data
