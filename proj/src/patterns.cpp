#include "tableguard/patterns.hpp"

#include <algorithm>
#include <array>

#include "tableguard/text.hpp"

namespace tableguard::patterns {

using text::is_alnum;
using text::is_alpha;
using text::is_digit;
using text::is_upper;

bool is_word_start(std::string_view t, std::size_t pos) { return pos == 0 || !is_alnum(t[pos - 1]); }
bool is_word_end(std::string_view t, std::size_t pos) { return pos >= t.size() || !is_alnum(t[pos]); }

namespace {

bool at(std::string_view t, std::size_t i, char c) { return i < t.size() && t[i] == c; }
bool digit_at(std::string_view t, std::size_t i) { return i < t.size() && is_digit(t[i]); }
bool slot_at(std::string_view t, std::size_t i, char ph) {
  return i < t.size() && (is_digit(t[i]) || (ph != 0 && t[i] == ph));
}
bool slots(std::string_view t, std::size_t i, std::size_t n, char ph) {
  for (std::size_t k = 0; k < n; ++k) {
    if (!slot_at(t, i + k, ph)) return false;
  }
  return true;
}
bool digits(std::string_view t, std::size_t i, std::size_t n) { return slots(t, i, n, 0); }

std::size_t run(std::string_view t, std::size_t i, bool (*pred)(char)) {
  std::size_t j = i;
  while (j < t.size() && pred(t[j])) ++j;
  return j - i;
}

std::string_view alpha_word(std::string_view t, std::size_t pos) {
  return t.substr(pos, run(t, pos, is_alpha));
}

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};
constexpr std::array<std::string_view, 12> kMonthAbbrevs = {
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};

constexpr std::string_view kStreetSuffixes[] = {
    "street", "st",   "avenue", "ave",  "road",    "rd",   "boulevard", "blvd",
    "lane",   "ln",   "drive",  "dr",   "court",   "ct",   "way",       "place",
    "pl",     "terrace", "ter", "parkway", "pkwy", "highway", "hwy",   "circle",
    "cir",    "square",  "sq",  "trail",   "trl",  "alley", "plaza"};

constexpr std::string_view kStateCodes[] = {
    "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "FL", "GA", "HI", "ID", "IL", "IN",
    "IA", "KS", "KY", "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO", "MT", "NE", "NV",
    "NH", "NJ", "NM", "NY", "NC", "ND", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN",
    "TX", "UT", "VT", "VA", "WA", "WV", "WI", "WY", "DC", "PR", "GU", "VI", "AS", "MP"};

bool capitalized_shape(std::string_view w) {
  const auto shape = text::case_shape(w);
  return shape == text::CaseShape::Title || shape == text::CaseShape::Upper;
}

bool is_ordinal(std::string_view w) {
  const std::size_t d = run(w, 0, is_digit);
  if (d == 0 || d + 2 != w.size()) return false;
  const auto tail = text::fold(w.substr(d));
  return tail == "st" || tail == "nd" || tail == "rd" || tail == "th";
}

/// Capitalized alphabetic word at pos (word-bounded), or empty.
std::string_view cap_word(std::string_view t, std::size_t pos) {
  if (pos >= t.size() || !is_upper(t[pos]) || !is_word_start(t, pos)) return {};
  const auto w = alpha_word(t, pos);
  if (!is_word_end(t, pos + w.size())) return {};
  return w;
}

/// ", City Words, ST 12345[-6789]" starting at pos; returns its length or 0.
std::size_t match_city_state_zip(std::string_view t, std::size_t pos) {
  if (!(at(t, pos, ',') && at(t, pos + 1, ' '))) return 0;
  std::size_t i = pos + 2;
  std::size_t words = 0;
  for (;;) {
    const auto w = cap_word(t, i);
    if (w.empty()) break;
    ++words;
    i += w.size();
    if (words < 3 && at(t, i, ' ') && !cap_word(t, i + 1).empty()) {
      ++i;
      continue;
    }
    break;
  }
  if (words == 0) return 0;
  if (!(at(t, i, ',') && at(t, i + 1, ' '))) return 0;
  i += 2;
  if (!(i + 2 <= t.size() && is_state_code(t.substr(i, 2)) && is_word_end(t, i + 2))) return 0;
  i += 2;
  if (!(at(t, i, ' ') && digits(t, i + 1, 5))) return 0;
  i += 6;
  if (at(t, i, '-') && digits(t, i + 1, 4)) i += 5;
  if (!is_word_end(t, i) || digit_at(t, i)) return 0;
  return i - pos;
}

int month_index(std::string_view word, bool& abbreviated) {
  const auto folded = text::fold(word);
  for (std::size_t m = 0; m < kMonths.size(); ++m) {
    if (folded == kMonths[m]) {
      abbreviated = false;
      return static_cast<int>(m);
    }
  }
  if (folded == "sept") {
    abbreviated = true;
    return 8;
  }
  for (std::size_t m = 0; m < kMonthAbbrevs.size(); ++m) {
    if (folded == kMonthAbbrevs[m]) {
      abbreviated = true;
      return static_cast<int>(m);
    }
  }
  return -1;
}

bool date_boundary_before(std::string_view t, std::size_t pos) {
  return pos == 0 || !(is_alnum(t[pos - 1]) || t[pos - 1] == '/' || t[pos - 1] == '-');
}
bool date_boundary_after(std::string_view t, std::size_t pos) {
  return pos >= t.size() || !(is_alnum(t[pos]) || t[pos] == '/' ||
                              (t[pos] == '-' && digit_at(t, pos + 1)));
}

}  // namespace

std::size_t match_phone(std::string_view t, std::size_t pos, char ph) {
  if (!is_word_start(t, pos)) return 0;
  if (at(t, pos, '(')) {
    if (digits(t, pos + 1, 3) && at(t, pos + 4, ')') && at(t, pos + 5, ' ') &&
        slots(t, pos + 6, 3, ph) && at(t, pos + 9, '-') && slots(t, pos + 10, 4, ph) &&
        is_word_end(t, pos + 14)) {
      return 14;
    }
    return 0;
  }
  if (!digits(t, pos, 3)) return 0;
  const char sep = pos + 3 < t.size() ? t[pos + 3] : '\0';
  if (sep != '.' && sep != '-') return 0;
  if (slots(t, pos + 4, 3, ph) && at(t, pos + 7, sep) && slots(t, pos + 8, 4, ph) &&
      is_word_end(t, pos + 12) && !(at(t, pos + 12, sep) && digit_at(t, pos + 13))) {
    return 12;
  }
  return 0;
}

std::size_t match_credit_card(std::string_view t, std::size_t pos, char ph) {
  if (!is_word_start(t, pos) || !digit_at(t, pos) || !slots(t, pos, 4, ph)) return 0;
  const char sep = pos + 4 < t.size() ? t[pos + 4] : '\0';
  if (sep == ' ' || sep == '-') {
    std::size_t i = pos + 4;
    for (int group = 1; group < 4; ++group) {
      if (!at(t, i, sep) || !slots(t, i + 1, 4, ph)) return 0;
      i += 5;
    }
    if (!is_word_end(t, i) || (at(t, i, sep) && digit_at(t, i + 1))) return 0;
    return i - pos;
  }
  if (slots(t, pos, 16, ph) && is_word_end(t, pos + 16)) return 16;
  return 0;
}

std::size_t match_id(std::string_view t, std::size_t pos, const IdPattern& p) {
  if (!is_word_start(t, pos)) return 0;
  const std::size_t letters = run(t.substr(pos), 0, is_upper);
  if (letters < p.min_letters || letters > p.max_letters) return 0;
  const std::size_t nums = run(t.substr(pos + letters), 0, is_digit);
  if (nums < p.min_digits || nums > p.max_digits) return 0;
  if (!is_word_end(t, pos + letters + nums)) return 0;
  return letters + nums;
}

int weekday_index(std::string_view word) {
  for (std::size_t d = 0; d < std::size(kWeekdays); ++d) {
    if (text::iequals(word, kWeekdays[d])) return static_cast<int>(d);
  }
  return -1;
}

std::size_t match_weekday(std::string_view t, std::size_t pos) {
  if (!is_word_start(t, pos) || pos >= t.size() || !is_alpha(t[pos])) return 0;
  const auto w = alpha_word(t, pos);
  if (!is_word_end(t, pos + w.size()) || weekday_index(w) < 0) return 0;
  const auto shape = text::case_shape(w);
  return shape == text::CaseShape::Mixed ? 0 : w.size();
}

std::size_t match_date(std::string_view t, std::size_t pos) {
  if (pos >= t.size()) return 0;
  if (is_digit(t[pos])) {
    if (!date_boundary_before(t, pos)) return 0;
    // yyyy-mm-dd
    if (digits(t, pos, 4) && at(t, pos + 4, '-') && digits(t, pos + 5, 2) &&
        at(t, pos + 7, '-') && digits(t, pos + 8, 2) && date_boundary_after(t, pos + 10)) {
      const int month = (t[pos + 5] - '0') * 10 + (t[pos + 6] - '0');
      const int day = (t[pos + 8] - '0') * 10 + (t[pos + 9] - '0');
      if (month >= 1 && month <= 12 && day >= 1 && day <= 31) return 10;
      return 0;
    }
    // d{1,2}/d{1,2}/d{2,4}
    std::size_t i = pos;
    const std::size_t a = run(t.substr(i), 0, is_digit);
    if (a < 1 || a > 2 || !at(t, i + a, '/')) return 0;
    i += a + 1;
    const std::size_t b = run(t.substr(i), 0, is_digit);
    if (b < 1 || b > 2 || !at(t, i + b, '/')) return 0;
    i += b + 1;
    const std::size_t c = run(t.substr(i), 0, is_digit);
    if (c < 2 || c > 4 || c == 3) return 0;
    i += c;
    if (!date_boundary_after(t, i)) return 0;
    return i - pos;
  }
  if (!is_upper(t[pos]) || !is_word_start(t, pos)) return 0;
  const auto w = alpha_word(t, pos);
  if (!is_word_end(t, pos + w.size()) || !capitalized_shape(w)) return 0;
  bool abbreviated = false;
  const int month = month_index(w, abbreviated);
  if (month < 0) return 0;
  std::size_t i = pos + w.size();
  if (abbreviated && at(t, i, '.')) ++i;
  bool has_day = false, has_year = false;
  // " 5", " 5th", " 12,"
  if (at(t, i, ' ')) {
    const std::size_t d = run(t.substr(i + 1), 0, is_digit);
    std::size_t j = i + 1 + d;
    if (d >= 1 && d <= 2) {
      if (j + 2 <= t.size() && is_ordinal(t.substr(i + 1, d + 2))) j += 2;
      if (is_word_end(t, j)) {
        has_day = true;
        i = j;
      }
    } else if (d == 4 && is_word_end(t, j)) {
      has_year = true;
      i = j;
    }
  }
  if (has_day) {
    std::size_t j = i;
    if (at(t, j, ',')) ++j;
    if (at(t, j, ' ') && digits(t, j + 1, 4) && is_word_end(t, j + 5)) {
      has_year = true;
      i = j + 5;
    }
  }
  const bool standalone_ok = !abbreviated && month != 4;  // "May" is too ambiguous alone
  if (!has_day && !has_year && !standalone_ok) return 0;
  return i - pos;
}

bool is_street_suffix(std::string_view word) {
  const auto folded = text::fold(word);
  return std::find(std::begin(kStreetSuffixes), std::end(kStreetSuffixes), folded) !=
         std::end(kStreetSuffixes);
}

bool is_state_code(std::string_view word) {
  return std::find(std::begin(kStateCodes), std::end(kStateCodes), word) != std::end(kStateCodes);
}

std::size_t match_street_address(std::string_view t, std::size_t pos) {
  if (!is_word_start(t, pos) || !digit_at(t, pos)) return 0;
  const std::size_t number = run(t.substr(pos), 0, is_digit);
  if (number > 6 || !at(t, pos + number, ' ')) return 0;
  std::size_t i = pos + number;
  std::size_t name_words = 0;
  for (int k = 0; k < 5 && at(t, i, ' '); ++k) {
    const std::size_t start = i + 1;
    const std::size_t len = run(t.substr(start), 0, is_alnum);
    if (len == 0 || !is_word_end(t, start + len)) return 0;
    const auto w = t.substr(start, len);
    const bool alpha_cap = is_upper(w.front()) && run(w, 0, is_alpha) == w.size() &&
                           capitalized_shape(w);
    if (alpha_cap && name_words > 0 && is_street_suffix(w)) {
      const std::size_t end = start + len;
      return end - pos + match_city_state_zip(t, end);
    }
    if (!alpha_cap && !is_ordinal(w)) return 0;
    ++name_words;
    i = start + len;
  }
  return 0;
}

std::size_t match_location(std::string_view t, std::size_t pos) {
  std::size_t i = pos;
  for (int words = 0; words < 3; ++words) {
    const auto w = cap_word(t, i);
    if (w.empty()) return 0;
    i += w.size();
    if (at(t, i, ',') && at(t, i + 1, ' ') && i + 4 <= t.size() &&
        is_state_code(t.substr(i + 2, 2)) && is_word_end(t, i + 4)) {
      return i + 4 - pos;
    }
    if (!at(t, i, ' ')) return 0;
    ++i;
  }
  return 0;
}

namespace {

bool local_char(char c) {
  return is_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}
bool domain_char(char c) { return is_alnum(c) || c == '-' || c == '.'; }

}  // namespace

std::pair<std::size_t, std::size_t> match_email_around(std::string_view t, std::size_t at_pos) {
  if (at_pos >= t.size() || t[at_pos] != '@') return {0, 0};
  std::size_t start = at_pos;
  while (start > 0 && local_char(t[start - 1])) --start;
  while (start < at_pos && t[start] == '.') ++start;
  if (start == at_pos || t[at_pos - 1] == '.') return {0, 0};

  std::size_t end = at_pos + 1;
  while (end < t.size() && domain_char(t[end])) ++end;
  while (end > at_pos + 1 && (t[end - 1] == '.' || t[end - 1] == '-')) --end;
  const auto domain = t.substr(at_pos + 1, end - at_pos - 1);
  if (domain.empty()) return {0, 0};

  std::size_t labels = 0;
  std::string_view last;
  std::size_t s = 0;
  for (;;) {
    const auto dot = domain.find('.', s);
    const auto label = domain.substr(s, dot == std::string_view::npos ? dot : dot - s);
    if (label.empty() || label.front() == '-' || label.back() == '-') return {0, 0};
    ++labels;
    last = label;
    if (dot == std::string_view::npos) break;
    s = dot + 1;
  }
  if (labels < 2 || last.size() < 2 || run(last, 0, is_alpha) != last.size()) return {0, 0};
  return {start, end};
}

bool is_phone(std::string_view s, char ph) { return !s.empty() && match_phone(s, 0, ph) == s.size(); }

bool is_credit_card(std::string_view s, char ph) {
  return !s.empty() && match_credit_card(s, 0, ph) == s.size();
}

bool is_email(std::string_view s) {
  const auto a = s.find('@');
  if (a == std::string_view::npos || s.find('@', a + 1) != std::string_view::npos) return false;
  const auto [start, end] = match_email_around(s, a);
  return start == 0 && end == s.size() && end > 0;
}

}  // namespace tableguard::patterns
