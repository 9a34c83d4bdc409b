#include "tableguard/text.hpp"

#include "tableguard/error.hpp"

namespace tableguard {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::FormatMismatch: return "FormatMismatch";
    case ErrorCode::InsufficientGazetteer: return "InsufficientGazetteer";
    case ErrorCode::PolicyGap: return "PolicyGap";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Internal: return "InternalError";
  }
  return "Unknown";
}

}  // namespace tableguard

namespace tableguard::text {

std::string fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_upper(c);
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (to_lower(a[i]) != to_lower(b[i])) return false;
  }
  return true;
}

bool is_ascii(std::string_view s) {
  for (char c : s) {
    if (static_cast<unsigned char>(c) >= 0x80) return false;
  }
  return true;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string digits_only(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (is_digit(c)) out.push_back(c);
  }
  return out;
}

std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

CaseShape case_shape(std::string_view word) {
  bool any_upper = false, any_lower = false;
  for (char c : word) {
    any_upper |= is_upper(c);
    any_lower |= is_lower(c);
  }
  if (any_upper && !any_lower) return CaseShape::Upper;
  if (any_lower && !any_upper) return CaseShape::Lower;
  if (!word.empty() && is_upper(word.front())) {
    bool rest_lower = true;
    for (std::size_t i = 1; i < word.size(); ++i) {
      if (is_upper(word[i]) && word[i - 1] != '-' && word[i - 1] != '\'') rest_lower = false;
    }
    if (rest_lower) return CaseShape::Title;
  }
  return CaseShape::Mixed;
}

std::string title_case(std::string_view word) {
  std::string out(word.size(), '\0');
  bool start = true;
  for (std::size_t i = 0; i < word.size(); ++i) {
    out[i] = start ? to_upper(word[i]) : to_lower(word[i]);
    start = word[i] == '-' || word[i] == '\'' || word[i] == ' ';
  }
  return out;
}

std::string mirror_case(std::string_view model, std::string_view word) {
  switch (case_shape(model)) {
    case CaseShape::Upper: return upper(word);
    case CaseShape::Lower: return fold(word);
    default: return title_case(word);
  }
}

}  // namespace tableguard::text
