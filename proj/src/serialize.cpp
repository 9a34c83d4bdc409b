#include "tableguard/serialize.hpp"

#include <fstream>
#include <sstream>

#include "tableguard/error.hpp"

namespace tableguard {

using nlohmann::json;

void to_json(json& j, const EntityKind& v) { j = to_string(v); }
void from_json(const json& j, EntityKind& v) { v = parse_entity_kind(j.get<std::string>()); }

void to_json(json& j, const EntitySpan& v) {
  j = json{{"start", v.start},           {"end", v.end},
           {"kind", v.kind},             {"surface", v.surface},
           {"normalized", v.normalized}, {"confidence", v.confidence}};
}

void from_json(const json& j, EntitySpan& v) {
  v.start = j.at("start").get<std::size_t>();
  v.end = j.at("end").get<std::size_t>();
  v.kind = j.at("kind").get<EntityKind>();
  v.surface = j.value("surface", std::string{});
  v.normalized = j.value("normalized", std::string{});
  v.confidence = j.value("confidence", 1.0);
}

void to_json(json& j, const EntityCluster& v) {
  j = json{{"cluster_key", v.cluster_key},
           {"members", v.members},
           {"representative", v.representative},
           {"attributes", v.attributes}};
}

void from_json(const json& j, EntityCluster& v) {
  v.cluster_key = j.at("cluster_key").get<std::string>();
  v.members = j.at("members").get<std::vector<EntitySpan>>();
  v.representative = j.at("representative").get<std::size_t>();
  v.attributes = j.value("attributes", std::map<std::string, std::string>{});
}

void to_json(json& j, const StrategyKind& v) { j = std::string(to_string(v)); }
void from_json(const json& j, StrategyKind& v) { v = parse_strategy(j.get<std::string>()); }

void to_json(json& j, const Selector& v) {
  j = json::object();
  if (v.kind) j["kind"] = *v.kind;
  if (v.column) j["column"] = *v.column;
}

void from_json(const json& j, Selector& v) {
  v = Selector{};
  if (j.contains("kind")) v.kind = j.at("kind").get<EntityKind>();
  if (j.contains("column")) v.column = j.at("column").get<std::string>();
}

json params_to_json(const StrategyParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MaskParams>) {
          json j{{"preserve_separators", p.preserve_separators}};
          if (p.keep_prefix) j["keep_prefix"] = *p.keep_prefix;
          if (p.keep_suffix) j["keep_suffix"] = *p.keep_suffix;
          if (p.mask_char) j["mask_char"] = std::string(1, *p.mask_char);
          return j;
        } else if constexpr (std::is_same_v<T, GaussianParams>) {
          return json{{"sigma", p.sigma}};
        } else if constexpr (std::is_same_v<T, LaplaceParams>) {
          return json{{"epsilon", p.epsilon}, {"sensitivity", p.sensitivity}};
        } else if constexpr (std::is_same_v<T, SurrogateParams>) {
          return json{{"rank_band_width", p.rank_band_width},
                      {"era_aware", p.era_aware},
                      {"gender_match", p.gender_match}};
        } else {
          return json::object();
        }
      },
      params);
}

StrategyParams params_from_json(StrategyKind strategy, const json& j) {
  const json empty = json::object();
  const json& p = j.is_null() ? empty : j;
  switch (strategy) {
    case StrategyKind::Mask: {
      MaskParams m;
      if (p.contains("keep_prefix")) m.keep_prefix = p.at("keep_prefix").get<std::size_t>();
      if (p.contains("keep_suffix")) m.keep_suffix = p.at("keep_suffix").get<std::size_t>();
      if (p.contains("mask_char")) {
        const auto s = p.at("mask_char").get<std::string>();
        if (s.size() != 1) fail(ErrorCode::InvalidParams, "mask_char must be a single byte");
        m.mask_char = s.front();
      }
      m.preserve_separators = p.value("preserve_separators", true);
      return m;
    }
    case StrategyKind::Gaussian:
      if (!p.contains("sigma")) fail(ErrorCode::InvalidParams, "gaussian params need sigma");
      return GaussianParams{p.at("sigma").get<double>()};
    case StrategyKind::Laplace:
      if (!p.contains("epsilon")) fail(ErrorCode::InvalidParams, "laplace params need epsilon");
      return LaplaceParams{p.at("epsilon").get<double>(), p.value("sensitivity", 1.0)};
    case StrategyKind::Surrogate: {
      SurrogateParams s;
      s.rank_band_width = p.value("rank_band_width", s.rank_band_width);
      s.era_aware = p.value("era_aware", s.era_aware);
      s.gender_match = p.value("gender_match", s.gender_match);
      return s;
    }
    case StrategyKind::PassThrough:
      return std::monostate{};
  }
  return std::monostate{};
}

void to_json(json& j, const PolicyRule& v) {
  j = v.selector;
  j["strategy"] = v.strategy;
  j["params"] = params_to_json(v.params);
}

void from_json(const json& j, PolicyRule& v) {
  v.selector = j.get<Selector>();
  v.strategy = j.at("strategy").get<StrategyKind>();
  v.params = params_from_json(v.strategy, j.value("params", json::object()));
}

void to_json(json& j, const IdPattern& v) {
  j = json{{"subtype", v.subtype},
           {"min_letters", v.min_letters},
           {"max_letters", v.max_letters},
           {"min_digits", v.min_digits},
           {"max_digits", v.max_digits}};
}

void from_json(const json& j, IdPattern& v) {
  v.subtype = j.at("subtype").get<std::string>();
  v.min_letters = j.at("min_letters").get<std::size_t>();
  v.max_letters = j.at("max_letters").get<std::size_t>();
  v.min_digits = j.at("min_digits").get<std::size_t>();
  v.max_digits = j.at("max_digits").get<std::size_t>();
  if (v.min_letters > v.max_letters || v.min_digits > v.max_digits || v.max_digits == 0) {
    fail(ErrorCode::InvalidParams, "inconsistent id pattern '" + v.subtype + "'");
  }
}

void to_json(json& j, const CustomPattern& v) {
  j = json{{"label", v.label}, {"pattern", v.regex}};
}

void from_json(const json& j, CustomPattern& v) {
  v.label = j.at("label").get<std::string>();
  v.regex = j.at("pattern").get<std::string>();
}

void to_json(json& j, const RecognizerConfig& v) {
  std::vector<std::string> kinds;
  for (KindTag t : v.enabled_kinds) kinds.emplace_back(tag_name(t));
  j = json{{"enabled_kinds", kinds},
           {"confidence_threshold", v.confidence_threshold},
           {"locale", v.locale},
           {"id_patterns", v.id_patterns},
           {"custom_patterns", v.custom_patterns}};
}

void from_json(const json& j, RecognizerConfig& v) {
  v = RecognizerConfig{};
  if (j.contains("enabled_kinds")) {
    v.enabled_kinds.clear();
    for (const auto& name : j.at("enabled_kinds")) {
      const auto tag = parse_tag(name.get<std::string>());
      if (!tag) fail(ErrorCode::Parse, "unknown kind in enabled_kinds: " + name.dump());
      v.enabled_kinds.insert(*tag);
    }
  }
  v.confidence_threshold = j.value("confidence_threshold", v.confidence_threshold);
  v.locale = j.value("locale", v.locale);
  if (j.contains("id_patterns")) v.id_patterns = j.at("id_patterns").get<std::vector<IdPattern>>();
  if (j.contains("custom_patterns")) {
    v.custom_patterns = j.at("custom_patterns").get<std::vector<CustomPattern>>();
  }
}

namespace {

std::string_view to_string(DefaultAction a) {
  return a == DefaultAction::Reject ? "reject" : "pass";
}

DefaultAction parse_default_action(std::string_view s) {
  if (s == "reject") return DefaultAction::Reject;
  if (s == "pass" || s == "pass_through") return DefaultAction::PassThrough;
  fail(ErrorCode::Parse, "default_action must be 'pass' or 'reject'");
}

}  // namespace

void to_json(json& j, const Policy& v) {
  j = sanitized_policy_json(v);
  j["seed"] = v.seed;
}

void from_json(const json& j, Policy& v) {
  v = Policy{};
  v.rules = j.value("rules", json::array()).get<std::vector<PolicyRule>>();
  v.seed = j.value("seed", std::uint64_t{0});
  v.default_action = parse_default_action(j.value("default_action", std::string("pass")));
  v.recognizer = j.value("recognizer", std::string("builtin"));
  if (j.contains("recognizer_config")) {
    v.recognizer_config = j.at("recognizer_config").get<RecognizerConfig>();
  }
}

json sanitized_policy_json(const Policy& v) {
  return json{{"rules", v.rules},
              {"default_action", to_string(v.default_action)},
              {"recognizer", v.recognizer},
              {"recognizer_config", v.recognizer_config}};
}

void to_json(json& j, const SurrogateRecord& v) {
  j = json{{"full", v.full}, {"given", v.given}};
}

void from_json(const json& j, SurrogateRecord& v) {
  v.full = j.at("full").get<std::string>();
  v.given = j.at("given").get<std::string>();
}

void to_json(json& j, const Replacement& v) {
  j = json{{"original", v.original}, {"replacement", v.replacement}, {"strategy", v.strategy}};
}

void from_json(const json& j, Replacement& v) {
  v.original = j.at("original").get<EntitySpan>();
  v.replacement = j.at("replacement").get<std::string>();
  v.strategy = j.at("strategy").get<StrategyKind>();
}

void to_json(json& j, const ObfuscationResult& v) {
  j = json{{"text", v.text},
           {"replacements", v.replacements},
           {"residual_scan", v.residual_scan},
           {"warnings", v.warnings}};
}

Policy parse_policy(std::string_view json_text) {
  Policy policy;
  try {
    policy = json::parse(json_text).get<Policy>();
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("policy: ") + e.what());
  }
  policy.validate();
  return policy;
}

Policy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open policy file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_policy(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace tableguard
