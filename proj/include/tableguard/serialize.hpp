#pragma once

// JSON interchange for the domain types: snake_case field names, byte
// offsets as integers, kinds and strategies as strings.

#include <filesystem>

#include <nlohmann/json.hpp>

#include "tableguard/model.hpp"

namespace tableguard {

void to_json(nlohmann::json& j, const EntityKind& v);
void from_json(const nlohmann::json& j, EntityKind& v);
void to_json(nlohmann::json& j, const EntitySpan& v);
void from_json(const nlohmann::json& j, EntitySpan& v);
void to_json(nlohmann::json& j, const EntityCluster& v);
void from_json(const nlohmann::json& j, EntityCluster& v);
void to_json(nlohmann::json& j, const StrategyKind& v);
void from_json(const nlohmann::json& j, StrategyKind& v);
void to_json(nlohmann::json& j, const Selector& v);
void from_json(const nlohmann::json& j, Selector& v);
void to_json(nlohmann::json& j, const PolicyRule& v);
void from_json(const nlohmann::json& j, PolicyRule& v);
void to_json(nlohmann::json& j, const IdPattern& v);
void from_json(const nlohmann::json& j, IdPattern& v);
void to_json(nlohmann::json& j, const CustomPattern& v);
void from_json(const nlohmann::json& j, CustomPattern& v);
void to_json(nlohmann::json& j, const RecognizerConfig& v);
void from_json(const nlohmann::json& j, RecognizerConfig& v);
void to_json(nlohmann::json& j, const Policy& v);
void from_json(const nlohmann::json& j, Policy& v);
void to_json(nlohmann::json& j, const SurrogateRecord& v);
void from_json(const nlohmann::json& j, SurrogateRecord& v);
void to_json(nlohmann::json& j, const Replacement& v);
void from_json(const nlohmann::json& j, Replacement& v);
void to_json(nlohmann::json& j, const ObfuscationResult& v);

/// Params are serialized relative to a strategy; the strategy decides the shape.
nlohmann::json params_to_json(const StrategyParams& params);
StrategyParams params_from_json(StrategyKind strategy, const nlohmann::json& j);

/// Policy without its seed, for display to callers.
nlohmann::json sanitized_policy_json(const Policy& policy);

Policy load_policy(const std::filesystem::path& path);
Policy parse_policy(std::string_view json_text);

}  // namespace tableguard
