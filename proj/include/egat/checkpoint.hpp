#ifndef EGAT_CHECKPOINT_HPP
#define EGAT_CHECKPOINT_HPP

#include <string>

#include "json.hpp"

#include "egat/model.hpp"

namespace egat {

nlohmann::json model_config_to_json(const ModelConfig& cfg);
/// Reads known keys, leaving absent ones at their defaults; unknown keys
/// raise an IoError so config typos do not pass silently.
ModelConfig model_config_from_json(const nlohmann::json& j);

/// Single-file checkpoint: one JSON header line (format version, config,
/// parameter manifest with shapes) followed by the parameter payloads as
/// little-endian 64-bit reals in manifest order.
void save_checkpoint(const Model& model, const std::string& path);
/// Rebuilds the model losslessly. Version mismatches and truncated or
/// inconsistent files raise IoError.
Model load_checkpoint(const std::string& path);

} // namespace egat

#endif // EGAT_CHECKPOINT_HPP
