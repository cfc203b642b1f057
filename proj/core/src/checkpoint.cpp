#include "spikegrad/checkpoint.hpp"

#include <sodium.h>

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "spikegrad/error.hpp"

namespace spikegrad::checkpoint {
namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("checkpoint: missing field '") + key + "'");
  return j.at(key);
}

Matrix decode_matrix(const json& layer, const char* key, std::size_t rows, std::size_t cols) {
  const std::vector<double> values = decode_weights(require(layer, key).get<std::string>());
  if (values.size() != rows * cols) {
    throw FormatError(std::string("checkpoint: ") + key + " holds " +
                      std::to_string(values.size()) + " values, expected " +
                      std::to_string(rows * cols));
  }
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data().begin());
  return m;
}

}  // namespace

json config_to_json(const NetworkConfig& c) {
  return json{{"layer_sizes", c.layer_sizes},
              {"theta", c.theta},
              {"tau", c.tau},
              {"sim_steps", c.sim_steps},
              {"alpha", c.alpha},
              {"mu", c.mu},
              {"beta", c.beta},
              {"epsilon", c.epsilon},
              {"batch_size", c.batch_size},
              {"seed", c.seed},
              {"rate_scale", c.rate_scale},
              {"weight_init_stddev", c.weight_init_stddev}};
}

void merge_config_json(const json& j, NetworkConfig& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  read_field(j, "layer_sizes", c.layer_sizes);
  read_field(j, "theta", c.theta);
  read_field(j, "tau", c.tau);
  read_field(j, "sim_steps", c.sim_steps);
  read_field(j, "alpha", c.alpha);
  read_field(j, "mu", c.mu);
  read_field(j, "beta", c.beta);
  read_field(j, "epsilon", c.epsilon);
  read_field(j, "batch_size", c.batch_size);
  read_field(j, "seed", c.seed);
  read_field(j, "rate_scale", c.rate_scale);
  read_field(j, "weight_init_stddev", c.weight_init_stddev);
}

std::string encode_weights(std::span<const double> values) {
  std::vector<unsigned char> raw(values.size() * 8);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto bits = std::bit_cast<std::uint64_t>(values[k]);
    for (int b = 0; b < 8; ++b) raw[k * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  const std::size_t len = sodium_base64_ENCODED_LEN(raw.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string out(len, '\0');
  sodium_bin2base64(out.data(), len, raw.data(), raw.size(), sodium_base64_VARIANT_ORIGINAL);
  out.resize(len - 1);  // drop the terminator
  return out;
}

std::vector<double> decode_weights(const std::string& text) {
  std::vector<unsigned char> raw(text.size() / 4 * 3 + 3);
  std::size_t raw_len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(raw.data(), raw.size(), text.data(), text.size(), nullptr, &raw_len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    throw FormatError("checkpoint: corrupted base64 weight payload");
  }
  if (raw_len % 8 != 0) throw FormatError("checkpoint: weight payload is not a whole number of doubles");
  std::vector<double> values(raw_len / 8);
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t{raw[k * 8 + b]} << (8 * b);
    values[k] = std::bit_cast<double>(bits);
  }
  return values;
}

json to_json(const Checkpoint& ckpt) {
  json j = config_to_json(ckpt.config);
  j["format_version"] = kFormatVersion;
  j["iteration_count"] = ckpt.iteration_count;
  j["rng_state_seed"] = ckpt.config.seed;
  json layers = json::array();
  for (const LayerSynapses& layer : ckpt.store.layers) {
    layers.push_back({{"rows", layer.w_current.rows()},
                      {"cols", layer.w_current.cols()},
                      {"w_current", encode_weights(layer.w_current.data())},
                      {"w_previous", encode_weights(layer.w_previous.data())}});
  }
  j["layers"] = std::move(layers);
  return j;
}

Checkpoint from_json(const json& j) {
  if (!j.is_object()) throw FormatError("checkpoint: not a JSON object");
  const json& version = require(j, "format_version");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    throw FormatError("checkpoint: unsupported format_version " + version.dump());
  }
  Checkpoint ckpt;
  try {
    merge_config_json(j, ckpt.config);
    ckpt.config.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
  ckpt.iteration_count = require(j, "iteration_count").get<std::size_t>();

  const json& layers = require(j, "layers");
  const auto& sizes = ckpt.config.layer_sizes;
  if (!layers.is_array() || layers.size() + 1 != sizes.size()) {
    throw FormatError("checkpoint: layer count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::size_t rows = require(layers[l], "rows").get<std::size_t>();
    const std::size_t cols = require(layers[l], "cols").get<std::size_t>();
    if (rows != sizes[l + 1] || cols != sizes[l]) {
      throw FormatError("checkpoint: layer " + std::to_string(l) + " is " + std::to_string(rows) +
                        "x" + std::to_string(cols) + " but layer_sizes implies " +
                        std::to_string(sizes[l + 1]) + "x" + std::to_string(sizes[l]));
    }
    LayerSynapses layer;
    layer.w_current = decode_matrix(layers[l], "w_current", rows, cols);
    layer.w_previous = decode_matrix(layers[l], "w_previous", rows, cols);
    ckpt.store.layers.push_back(std::move(layer));
  }
  return ckpt;
}

void save(const Checkpoint& ckpt, std::ostream& out) {
  out << to_json(ckpt).dump(2) << '\n';
  if (!out) throw FormatError("checkpoint: write failed");
}

void save(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("checkpoint: cannot open " + path.string() + " for writing");
  save(ckpt, out);
}

Checkpoint load(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint: invalid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
}

Checkpoint load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("checkpoint: cannot open " + path.string());
  return load(in);
}

}  // namespace spikegrad::checkpoint
