#include "tableguard/model.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "tableguard/error.hpp"

namespace tableguard {

namespace {

constexpr std::string_view kTagNames[] = {
    "person_name",   "given_name_only", "street_address", "location",
    "phone_number",  "credit_card_number", "email_address", "alphanumeric_id",
    "date_expression", "weekday_name",   "numeric_value",  "custom",
};

}  // namespace

std::string_view tag_name(KindTag tag) { return kTagNames[static_cast<std::size_t>(tag)]; }

std::optional<KindTag> parse_tag(std::string_view name) {
  for (KindTag tag : kAllKindTags) {
    if (tag_name(tag) == name) return tag;
  }
  return std::nullopt;
}

int kind_priority(KindTag tag) {
  switch (tag) {
    case KindTag::CreditCardNumber: return 0;
    case KindTag::PhoneNumber: return 1;
    case KindTag::EmailAddress: return 2;
    case KindTag::AlphanumericId: return 3;
    case KindTag::PersonName: return 4;
    case KindTag::StreetAddress: return 5;
    case KindTag::DateExpression: return 6;
    case KindTag::WeekdayName: return 7;
    case KindTag::Location: return 8;
    case KindTag::GivenNameOnly: return 9;
    case KindTag::NumericValue: return 10;
    case KindTag::Custom: return 11;
  }
  return 12;
}

std::string to_string(const EntityKind& kind) {
  std::string out(tag_name(kind.tag));
  if (!kind.qualifier.empty()) {
    out += ':';
    out += kind.qualifier;
  }
  return out;
}

EntityKind parse_entity_kind(std::string_view text) {
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto tag = parse_tag(head);
  if (!tag) fail(ErrorCode::Parse, "unknown entity kind '" + std::string(text) + "'");
  std::string qualifier = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
  if (*tag == KindTag::Custom && qualifier.empty()) {
    fail(ErrorCode::Parse, "custom kind needs a label: 'custom:<label>'");
  }
  if (!qualifier.empty() && *tag != KindTag::Custom && *tag != KindTag::AlphanumericId) {
    fail(ErrorCode::Parse, "kind '" + std::string(head) + "' takes no qualifier");
  }
  return EntityKind(*tag, std::move(qualifier));
}

bool kinds_compatible(const EntityKind& a, const EntityKind& b) {
  if (a.is_name() && b.is_name()) return true;
  return a == b;
}

bool span_less(const EntitySpan& a, const EntitySpan& b) {
  return std::tie(a.start, a.end, a.kind) < std::tie(b.start, b.end, b.kind);
}

void validate_span(const EntitySpan& span, std::string_view source) {
  if (!(span.start < span.end && span.end <= source.size())) {
    fail(ErrorCode::InvalidInput, "span [" + std::to_string(span.start) + "," +
                                      std::to_string(span.end) + ") out of range for text of " +
                                      std::to_string(source.size()) + " bytes");
  }
  if (source.substr(span.start, span.length()) != span.surface) {
    fail(ErrorCode::InvalidInput, "span surface does not match source at [" +
                                      std::to_string(span.start) + "," +
                                      std::to_string(span.end) + ")");
  }
  if (!(span.confidence >= 0.0 && span.confidence <= 1.0)) {
    fail(ErrorCode::InvalidInput, "span confidence outside [0,1]");
  }
  if (span.kind.tag == KindTag::Custom && span.kind.qualifier.empty()) {
    fail(ErrorCode::InvalidInput, "custom span without label");
  }
}

std::string make_cluster_key(const EntityKind& kind, std::string_view normalized) {
  std::string key = to_string(kind);
  key += '|';
  key += normalized;
  return key;
}

std::size_t pick_representative(const std::vector<EntitySpan>& members) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (members[i].surface.size() > members[best].surface.size()) best = i;
  }
  return best;
}

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::PassThrough: return "pass";
    case StrategyKind::Mask: return "mask";
    case StrategyKind::Gaussian: return "gaussian";
    case StrategyKind::Laplace: return "laplace";
    case StrategyKind::Surrogate: return "surrogate";
  }
  return "pass";
}

StrategyKind parse_strategy(std::string_view text) {
  if (text == "pass" || text == "pass_through") return StrategyKind::PassThrough;
  if (text == "mask") return StrategyKind::Mask;
  if (text == "gaussian") return StrategyKind::Gaussian;
  if (text == "laplace") return StrategyKind::Laplace;
  if (text == "surrogate") return StrategyKind::Surrogate;
  fail(ErrorCode::Parse, "unknown strategy '" + std::string(text) + "'");
}

void validate_params(StrategyKind strategy, const StrategyParams& params) {
  switch (strategy) {
    case StrategyKind::Gaussian: {
      const auto* p = std::get_if<GaussianParams>(&params);
      if (!p) fail(ErrorCode::InvalidParams, "gaussian strategy needs sigma");
      if (!(p->sigma >= 0.0) || !std::isfinite(p->sigma)) {
        fail(ErrorCode::InvalidParams, "sigma must be finite and >= 0");
      }
      break;
    }
    case StrategyKind::Laplace: {
      const auto* p = std::get_if<LaplaceParams>(&params);
      if (!p) fail(ErrorCode::InvalidParams, "laplace strategy needs epsilon and sensitivity");
      if (!(p->epsilon > 0.0) || !std::isfinite(p->epsilon)) {
        fail(ErrorCode::InvalidParams, "epsilon must be > 0");
      }
      if (!(p->sensitivity > 0.0) || !std::isfinite(p->sensitivity)) {
        fail(ErrorCode::InvalidParams, "sensitivity must be > 0");
      }
      break;
    }
    case StrategyKind::Mask:
      if (!std::holds_alternative<MaskParams>(params)) {
        fail(ErrorCode::InvalidParams, "mask strategy needs mask params");
      }
      break;
    case StrategyKind::Surrogate:
      if (!std::holds_alternative<SurrogateParams>(params)) {
        fail(ErrorCode::InvalidParams, "surrogate strategy needs surrogate params");
      }
      break;
    case StrategyKind::PassThrough:
      break;
  }
}

bool glob_match(std::string_view pattern, std::string_view text) {
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

bool Selector::matches_kind(const EntityKind& k) const {
  if (!kind || kind->tag != k.tag) return false;
  return kind->qualifier.empty() || kind->qualifier == k.qualifier;
}

bool Selector::matches_column(std::string_view name) const {
  return column && !name.empty() && glob_match(*column, name);
}

std::vector<IdPattern> RecognizerConfig::default_id_patterns() {
  return {
      IdPattern{"policy-number", 2, 2, 8, 8},
      IdPattern{"drivers-license", 1, 4, 6, 8},
  };
}

const PolicyRule* Policy::resolve(const EntityKind& kind, std::string_view column) const {
  for (const auto& rule : rules) {
    if (rule.selector.matches_column(column) || rule.selector.matches_kind(kind)) return &rule;
  }
  return nullptr;
}

const PolicyRule* Policy::resolve_column(std::string_view column) const {
  for (const auto& rule : rules) {
    if (rule.selector.matches_column(column)) return &rule;
  }
  return nullptr;
}

bool Policy::covers(const EntityKind& kind) const {
  const auto* rule = resolve(kind);
  return rule && rule->strategy != StrategyKind::PassThrough;
}

void Policy::validate() const {
  std::set<std::string> labels;
  for (const auto& pattern : recognizer_config.custom_patterns) {
    if (pattern.label.empty()) fail(ErrorCode::InvalidParams, "custom pattern label is empty");
    if (!labels.insert(pattern.label).second) {
      fail(ErrorCode::InvalidParams, "duplicate custom label '" + pattern.label + "'");
    }
  }
  const double threshold = recognizer_config.confidence_threshold;
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    fail(ErrorCode::InvalidParams, "confidence_threshold must lie in [0,1]");
  }
  for (const auto& rule : rules) {
    if (!rule.selector.kind && !rule.selector.column) {
      fail(ErrorCode::InvalidParams, "policy rule has neither kind nor column selector");
    }
    if (rule.selector.kind && rule.selector.column) {
      fail(ErrorCode::InvalidParams, "policy rule selects by kind or by column, not both");
    }
    validate_params(rule.strategy, rule.params);
    if (rule.selector.kind && rule.strategy == StrategyKind::Surrogate) {
      const auto tag = rule.selector.kind->tag;
      if (tag != KindTag::PersonName && tag != KindTag::GivenNameOnly &&
          tag != KindTag::WeekdayName) {
        fail(ErrorCode::InvalidParams,
             "surrogate strategy is not available for " + to_string(*rule.selector.kind));
      }
    }
  }
  if (recognizer != "builtin" && !recognizer.starts_with("external:")) {
    fail(ErrorCode::InvalidParams, "recognizer must be 'builtin' or 'external:<command>'");
  }
}

}  // namespace tableguard
