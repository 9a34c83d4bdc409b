#pragma once

// Domain types shared by every module. Nothing in here performs I/O or
// draws randomness.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tableguard {

enum class KindTag : std::uint8_t {
  PersonName,
  GivenNameOnly,
  StreetAddress,
  Location,
  PhoneNumber,
  CreditCardNumber,
  EmailAddress,
  AlphanumericId,
  DateExpression,
  WeekdayName,
  NumericValue,
  Custom,
};

inline constexpr KindTag kAllKindTags[] = {
    KindTag::PersonName,       KindTag::GivenNameOnly, KindTag::StreetAddress,
    KindTag::Location,         KindTag::PhoneNumber,   KindTag::CreditCardNumber,
    KindTag::EmailAddress,     KindTag::AlphanumericId, KindTag::DateExpression,
    KindTag::WeekdayName,      KindTag::NumericValue,  KindTag::Custom,
};

std::string_view tag_name(KindTag tag);
std::optional<KindTag> parse_tag(std::string_view name);

/// Conflict-resolution rank of a kind; lower wins.
int kind_priority(KindTag tag);

/// An entity kind plus its qualifier. The qualifier is the subtype of an
/// AlphanumericId ("policy-number", "drivers-license", "custom") or the
/// label of a Custom kind; it is empty for every other tag.
struct EntityKind {
  KindTag tag = KindTag::Custom;
  std::string qualifier;

  EntityKind() = default;
  EntityKind(KindTag t, std::string q = {}) : tag(t), qualifier(std::move(q)) {}

  bool is_name() const {
    return tag == KindTag::PersonName || tag == KindTag::GivenNameOnly;
  }

  friend bool operator==(const EntityKind&, const EntityKind&) = default;
  friend auto operator<=>(const EntityKind&, const EntityKind&) = default;
};

/// "person_name", "alphanumeric_id:policy-number", "custom:badge".
std::string to_string(const EntityKind& kind);
EntityKind parse_entity_kind(std::string_view text);

/// Name kinds may share a cluster; every other kind clusters only with itself.
bool kinds_compatible(const EntityKind& a, const EntityKind& b);

struct EntitySpan {
  std::size_t start = 0;  // byte offset, inclusive
  std::size_t end = 0;    // byte offset, exclusive
  EntityKind kind;
  std::string surface;
  std::string normalized;
  double confidence = 1.0;

  std::size_t length() const { return end - start; }
  bool overlaps(const EntitySpan& other) const {
    return start < other.end && other.start < end;
  }

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

/// Total order: start, then end, then kind.
bool span_less(const EntitySpan& a, const EntitySpan& b);

/// Throws InvalidInput unless the span's offsets and surface agree with source.
void validate_span(const EntitySpan& span, std::string_view source);

struct EntityCluster {
  std::string cluster_key;
  std::vector<EntitySpan> members;
  std::size_t representative = 0;
  std::map<std::string, std::string> attributes;

  const EntitySpan& rep() const { return members.at(representative); }
  const EntityKind& kind() const { return rep().kind; }

  friend bool operator==(const EntityCluster&, const EntityCluster&) = default;
};

/// Key derived from the representative only, so it is independent of the
/// order in which mentions were seen.
std::string make_cluster_key(const EntityKind& kind, std::string_view normalized);

/// Index of the longest member surface; ties go to the earliest member.
std::size_t pick_representative(const std::vector<EntitySpan>& members);

enum class StrategyKind : std::uint8_t { PassThrough, Mask, Gaussian, Laplace, Surrogate };

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view text);

struct MaskParams {
  std::optional<std::size_t> keep_prefix;
  std::optional<std::size_t> keep_suffix;
  std::optional<char> mask_char;  // kind default: 'X', or 'x' for email
  bool preserve_separators = true;

  friend bool operator==(const MaskParams&, const MaskParams&) = default;
};

struct GaussianParams {
  double sigma = 0.0;
  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

struct LaplaceParams {
  double epsilon = 1.0;
  double sensitivity = 1.0;
  friend bool operator==(const LaplaceParams&, const LaplaceParams&) = default;
};

struct SurrogateParams {
  std::size_t rank_band_width = 100;
  bool era_aware = false;
  bool gender_match = true;
  friend bool operator==(const SurrogateParams&, const SurrogateParams&) = default;
};

using StrategyParams =
    std::variant<std::monostate, MaskParams, GaussianParams, LaplaceParams, SurrogateParams>;

/// Checks the value ranges (sigma >= 0, epsilon > 0, sensitivity > 0).
void validate_params(StrategyKind strategy, const StrategyParams& params);

struct Selector {
  std::optional<EntityKind> kind;   // empty qualifier matches any subtype
  std::optional<std::string> column;  // glob, '*' and '?' wildcards

  bool matches_kind(const EntityKind& k) const;
  bool matches_column(std::string_view name) const;

  friend bool operator==(const Selector&, const Selector&) = default;
};

bool glob_match(std::string_view pattern, std::string_view text);

struct PolicyRule {
  Selector selector;
  StrategyKind strategy = StrategyKind::PassThrough;
  StrategyParams params;

  friend bool operator==(const PolicyRule&, const PolicyRule&) = default;
};

enum class DefaultAction : std::uint8_t { PassThrough, Reject };

struct IdPattern {
  std::string subtype;
  std::size_t min_letters = 1, max_letters = 1;
  std::size_t min_digits = 1, max_digits = 1;
  friend bool operator==(const IdPattern&, const IdPattern&) = default;
};

struct CustomPattern {
  std::string label;
  std::string regex;  // ECMAScript
  friend bool operator==(const CustomPattern&, const CustomPattern&) = default;
};

struct RecognizerConfig {
  std::set<KindTag> enabled_kinds{std::begin(kAllKindTags), std::end(kAllKindTags)};
  double confidence_threshold = 0.5;
  std::string locale = "en-US";
  std::vector<IdPattern> id_patterns = default_id_patterns();
  std::vector<CustomPattern> custom_patterns;

  bool enabled(KindTag tag) const { return enabled_kinds.contains(tag); }

  /// en-US: policy-number [A-Z]{2}\d{8} ahead of drivers-license [A-Z]{1,4}\d{6,8}.
  static std::vector<IdPattern> default_id_patterns();

  friend bool operator==(const RecognizerConfig&, const RecognizerConfig&) = default;
};

struct Policy {
  std::vector<PolicyRule> rules;
  std::uint64_t seed = 0;
  DefaultAction default_action = DefaultAction::PassThrough;
  std::string recognizer = "builtin";  // or "external:<command>"
  RecognizerConfig recognizer_config;

  /// First rule whose selector matches either the kind or the column.
  const PolicyRule* resolve(const EntityKind& kind, std::string_view column = {}) const;
  /// First rule whose column selector matches.
  const PolicyRule* resolve_column(std::string_view column) const;

  /// True when some rule would rewrite spans of this kind.
  bool covers(const EntityKind& kind) const;

  void validate() const;

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct SurrogateRecord {
  std::string full;
  std::string given;
  friend bool operator==(const SurrogateRecord&, const SurrogateRecord&) = default;
};

struct Replacement {
  EntitySpan original;
  std::string replacement;
  StrategyKind strategy = StrategyKind::PassThrough;
  friend bool operator==(const Replacement&, const Replacement&) = default;
};

class Ledger;

struct ObfuscationResult {
  std::string text;
  std::vector<Replacement> replacements;  // sorted by original start
  std::vector<EntitySpan> residual_scan;
  std::shared_ptr<const Ledger> ledger;
  std::vector<std::string> warnings;
};

}  // namespace tableguard
