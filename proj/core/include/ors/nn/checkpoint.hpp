#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "ors/nn/adam.hpp"
#include "ors/nn/mlp.hpp"

namespace ors::nn {

inline constexpr int kCheckpointFormatVersion = 1;

/// {format_version, widths, layers:[{in,out,activation,layer_norm}], params, adam?}
nlohmann::json mlp_to_json(const Mlp& net, const AdamState* adam = nullptr);
Mlp mlp_from_json(const nlohmann::json& doc);
std::optional<AdamState> adam_from_json(const nlohmann::json& doc);

nlohmann::json adam_to_json(const AdamState& adam);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace ors::nn
