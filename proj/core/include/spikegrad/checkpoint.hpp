#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spikegrad/network.hpp"

namespace spikegrad::checkpoint {

inline constexpr int kFormatVersion = 1;

struct Checkpoint {
  NetworkConfig config;
  SynapseStore store;
  std::size_t iteration_count = 0;
};

// Config scalars and layer sizes under their snake_case field names.
nlohmann::json config_to_json(const NetworkConfig& config);
// Overrides only the fields present in `j`; throws ConfigError on a type
// mismatch.
void merge_config_json(const nlohmann::json& j, NetworkConfig& config);

// Little-endian IEEE-754 doubles, row-major, base64 (standard alphabet).
std::string encode_weights(std::span<const double> values);
std::vector<double> decode_weights(const std::string& text);

nlohmann::json to_json(const Checkpoint& ckpt);
// Rejects unknown format versions, undecodable payloads and shapes that do not
// match layer_sizes. Caches are not persisted; the loaded store starts without
// them.
Checkpoint from_json(const nlohmann::json& j);

void save(const Checkpoint& ckpt, std::ostream& out);
void save(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load(std::istream& in);
Checkpoint load(const std::filesystem::path& path);

}  // namespace spikegrad::checkpoint
