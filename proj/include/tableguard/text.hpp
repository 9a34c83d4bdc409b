#pragma once

// ASCII helpers. Bytes >= 0x80 are never letters, digits or space here, so
// multi-byte UTF-8 sequences act as separators.

#include <string>
#include <string_view>
#include <vector>

namespace tableguard::text {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
inline bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }
inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }
inline char to_upper(char c) { return is_lower(c) ? static_cast<char>(c - 'a' + 'A') : c; }

std::string fold(std::string_view s);
std::string upper(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool is_ascii(std::string_view s);

/// Trims and collapses internal whitespace runs to one space.
std::string collapse_whitespace(std::string_view s);
std::string digits_only(std::string_view s);
std::vector<std::string_view> split_tokens(std::string_view s);

enum class CaseShape { Lower, Upper, Title, Mixed };
CaseShape case_shape(std::string_view word);
/// Re-cases word to the shape of model ("HOMER" -> upper, "homer" -> lower,
/// anything else -> title case, with capitals after '-' and '\'').
std::string mirror_case(std::string_view model, std::string_view word);
std::string title_case(std::string_view word);

}  // namespace tableguard::text
