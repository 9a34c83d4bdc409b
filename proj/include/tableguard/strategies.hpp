#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "tableguard/gazetteer.hpp"
#include "tableguard/model.hpp"
#include "tableguard/random.hpp"

namespace tableguard {

// Format-preserving masks. All are byte-length preserving and reject
// non-ASCII input with FormatMismatch.

/// Keeps the area code; every other digit becomes mask_char.
std::string mask_phone(std::string_view surface, char mask_char = 'X');
/// Keeps digits 1, 4 and 13-16 of a 16-digit card number.
std::string mask_credit_card(std::string_view surface, char mask_char = 'X');
/// Masks the local part and every domain label except the TLD.
std::string mask_email(std::string_view surface, char mask_char = 'x');
std::string mask_id(std::string_view surface, std::size_t keep_prefix, std::size_t keep_suffix,
                    char mask_char = 'X');
std::string mask_house_number(std::string_view surface, char mask_char = 'X');

/// Masks letters and digits outside the keep windows. With
/// preserve_separators the windows count only letters and digits and other
/// bytes pass through; without it every byte counts and is masked.
std::string mask_generic(std::string_view surface, const MaskParams& params);

/// Picks the mask for a kind: the fixed rules above unless keep windows are
/// given explicitly, in which case the generic window mask applies.
std::string apply_mask(const EntityKind& kind, std::string_view surface, const MaskParams& params);

double perturb_gaussian(double value, double sigma, DeterministicStream& stream);
/// value + Laplace(sensitivity / epsilon), one uniform per draw.
double dp_laplace(double value, double epsilon, double sensitivity, DeterministicStream& stream);

/// Parses a decimal number (surrounding whitespace allowed).
double parse_number(std::string_view text);
/// Formats value with the same number of fractional digits as `like`.
std::string format_like(double value, std::string_view like);

SurrogateRecord surrogate_person_name(const EntityCluster& cluster, const Gazetteer& gazetteer,
                                      const SurrogateParams& params, DeterministicStream& stream);

std::string surrogate_weekday(std::string_view surface, DeterministicStream& stream);

}  // namespace tableguard
