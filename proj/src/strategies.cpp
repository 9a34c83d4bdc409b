#include "tableguard/strategies.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "tableguard/error.hpp"
#include "tableguard/patterns.hpp"
#include "tableguard/text.hpp"

namespace tableguard {

namespace {

void require_ascii(std::string_view surface, std::string_view what) {
  if (!text::is_ascii(surface)) {
    fail(ErrorCode::FormatMismatch, std::string(what) + ": non-ASCII bytes are not maskable");
  }
}

bool digit_slot(char c, char mask_char) { return text::is_digit(c) || c == mask_char; }

}  // namespace

std::string mask_phone(std::string_view surface, char mask_char) {
  require_ascii(surface, "phone");
  if (!patterns::is_phone(surface, mask_char)) {
    fail(ErrorCode::FormatMismatch, "not a phone number (" + std::to_string(surface.size()) + " bytes)");
  }
  std::string out(surface);
  int slot = 0;
  for (char& c : out) {
    if (!digit_slot(c, mask_char)) continue;
    if (++slot > 3) c = mask_char;
  }
  return out;
}

std::string mask_credit_card(std::string_view surface, char mask_char) {
  require_ascii(surface, "credit card");
  if (!patterns::is_credit_card(surface, mask_char)) {
    fail(ErrorCode::FormatMismatch, "not a 16-digit card number");
  }
  std::string out(surface);
  int slot = 0;
  for (char& c : out) {
    if (!digit_slot(c, mask_char)) continue;
    ++slot;
    const bool keep = slot == 1 || slot == 4 || slot >= 13;
    if (!keep) c = mask_char;
  }
  return out;
}

std::string mask_email(std::string_view surface, char mask_char) {
  require_ascii(surface, "email");
  if (!patterns::is_email(surface)) {
    fail(ErrorCode::FormatMismatch, "not an email address");
  }
  std::string out(surface);
  const auto at = out.find('@');
  const auto tld_dot = out.rfind('.');
  for (std::size_t i = 0; i < tld_dot; ++i) {
    if (i == at) continue;
    if (i > at && out[i] == '.') continue;
    out[i] = mask_char;
  }
  return out;
}

std::string mask_id(std::string_view surface, std::size_t keep_prefix, std::size_t keep_suffix,
                    char mask_char) {
  require_ascii(surface, "id");
  for (char c : surface) {
    if (!text::is_alnum(c)) fail(ErrorCode::FormatMismatch, "id must be alphanumeric");
  }
  if (keep_prefix + keep_suffix >= surface.size()) {
    fail(ErrorCode::InvalidParams, "keep_prefix + keep_suffix must be shorter than the id (" +
                                       std::to_string(surface.size()) + " bytes)");
  }
  std::string out(surface);
  for (std::size_t i = keep_prefix; i < out.size() - keep_suffix; ++i) out[i] = mask_char;
  return out;
}

std::string mask_house_number(std::string_view surface, char mask_char) {
  require_ascii(surface, "address");
  std::size_t n = 0;
  while (n < surface.size() && text::is_digit(surface[n])) ++n;
  if (n == 0) fail(ErrorCode::FormatMismatch, "address has no leading house number");
  std::string out(surface);
  for (std::size_t i = 0; i < n; ++i) out[i] = mask_char;
  return out;
}

std::string mask_generic(std::string_view surface, const MaskParams& params) {
  require_ascii(surface, "value");
  const char mask_char = params.mask_char.value_or('X');
  const std::size_t keep_prefix = params.keep_prefix.value_or(0);
  const std::size_t keep_suffix = params.keep_suffix.value_or(0);
  std::string out(surface);
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!params.preserve_separators || text::is_alnum(out[i])) slots.push_back(i);
  }
  if (keep_prefix + keep_suffix > slots.size()) {
    fail(ErrorCode::InvalidParams, "keep windows exceed the value length");
  }
  for (std::size_t k = keep_prefix; k < slots.size() - keep_suffix; ++k) out[slots[k]] = mask_char;
  return out;
}

std::string apply_mask(const EntityKind& kind, std::string_view surface, const MaskParams& params) {
  const bool windows = params.keep_prefix || params.keep_suffix;
  if (windows) {
    if (kind.tag == KindTag::AlphanumericId) {
      return mask_id(surface, params.keep_prefix.value_or(0), params.keep_suffix.value_or(0),
                     params.mask_char.value_or('X'));
    }
    return mask_generic(surface, params);
  }
  switch (kind.tag) {
    case KindTag::PhoneNumber: return mask_phone(surface, params.mask_char.value_or('X'));
    case KindTag::CreditCardNumber: return mask_credit_card(surface, params.mask_char.value_or('X'));
    case KindTag::EmailAddress: return mask_email(surface, params.mask_char.value_or('x'));
    case KindTag::StreetAddress: return mask_house_number(surface, params.mask_char.value_or('X'));
    default: return mask_generic(surface, params);
  }
}

double perturb_gaussian(double value, double sigma, DeterministicStream& stream) {
  if (!std::isfinite(value)) fail(ErrorCode::InvalidInput, "value must be finite");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail(ErrorCode::InvalidParams, "sigma must be >= 0");
  return value + stream.next_gaussian() * sigma;
}

double dp_laplace(double value, double epsilon, double sensitivity, DeterministicStream& stream) {
  if (!std::isfinite(value)) fail(ErrorCode::InvalidInput, "value must be finite");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail(ErrorCode::InvalidParams, "epsilon must be > 0");
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    fail(ErrorCode::InvalidParams, "sensitivity must be > 0");
  }
  const double scale = sensitivity / epsilon;
  const double centered = stream.next_unit() - 0.5;
  const double sign = centered > 0 ? 1.0 : (centered < 0 ? -1.0 : 0.0);
  return value - scale * sign * std::log(1.0 - 2.0 * std::fabs(centered));
}

double parse_number(std::string_view s) {
  const auto trimmed = text::collapse_whitespace(s);
  std::string_view v = trimmed;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    fail(ErrorCode::FormatMismatch, "not a number: '" + std::string(s) + "'");
  }
  return out;
}

std::string format_like(double value, std::string_view like) {
  char buf[64];
  if (like.find_first_of("eE") != std::string_view::npos) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
  }
  const auto dot = like.find('.');
  int decimals = 0;
  if (dot != std::string_view::npos) {
    while (dot + 1 + decimals < like.size() && text::is_digit(like[dot + 1 + decimals])) ++decimals;
  }
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

SurrogateRecord surrogate_person_name(const EntityCluster& cluster, const Gazetteer& gazetteer,
                                      const SurrogateParams& params, DeterministicStream& stream) {
  if (cluster.members.empty()) fail(ErrorCode::InvalidInput, "empty cluster");
  if (!cluster.kind().is_name()) {
    fail(ErrorCode::InvalidParams, "name surrogate requested for " + to_string(cluster.kind()));
  }
  const auto tokens = text::split_tokens(cluster.rep().surface);
  if (tokens.empty()) fail(ErrorCode::InvalidInput, "name cluster has an empty representative");

  std::optional<std::string_view> era;
  if (const auto it = cluster.attributes.find("era"); it != cluster.attributes.end()) {
    era = it->second;
  }

  const auto first_token = tokens.front();
  const NameRecord* first = gazetteer.find(first_token, NamePart::First);
  const NameRecord given = first ? gazetteer.pick_surrogate(*first, params, stream, era)
                                 : gazetteer.pick_any(NamePart::First, std::nullopt, first_token, stream);

  SurrogateRecord out;
  out.given = text::mirror_case(first_token, given.name);
  out.full = out.given;
  if (tokens.size() >= 2) {
    const auto last_token = tokens.back();
    const NameRecord* last = gazetteer.find(last_token, NamePart::Last);
    const NameRecord family = last ? gazetteer.pick_surrogate(*last, params, stream, era)
                                   : gazetteer.pick_any(NamePart::Last, std::nullopt, last_token, stream);
    out.full += ' ';
    out.full += text::mirror_case(last_token, family.name);
  }
  return out;
}

std::string surrogate_weekday(std::string_view surface, DeterministicStream& stream) {
  const int original = patterns::weekday_index(surface);
  if (original < 0) fail(ErrorCode::FormatMismatch, "not a weekday name (" + std::to_string(surface.size()) + " bytes)");
  auto pick = static_cast<int>(stream.next_below(6));
  if (pick >= original) ++pick;
  return text::mirror_case(surface, patterns::kWeekdays[pick]);
}

}  // namespace tableguard
