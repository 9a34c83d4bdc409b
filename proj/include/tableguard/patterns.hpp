#pragma once

// Hand-written matchers behind the pattern recognizer. Each match_* function
// tries to match at exactly `pos` and returns the match length, or 0.
// Boundary checks (no letter/digit glued on either side) are included.
//
// A non-zero `placeholder` lets a masked digit slot ('X') stand in for a
// digit, which is how the masking strategies validate their own output.

#include <cstddef>
#include <string_view>
#include <utility>

#include "tableguard/model.hpp"

namespace tableguard::patterns {

std::size_t match_phone(std::string_view text, std::size_t pos, char placeholder = 0);
std::size_t match_credit_card(std::string_view text, std::size_t pos, char placeholder = 0);
std::size_t match_id(std::string_view text, std::size_t pos, const IdPattern& pattern);
std::size_t match_weekday(std::string_view text, std::size_t pos);
std::size_t match_date(std::string_view text, std::size_t pos);
std::size_t match_street_address(std::string_view text, std::size_t pos);
std::size_t match_location(std::string_view text, std::size_t pos);

/// Email whose '@' is at at_pos: returns {start, end} or {0, 0}.
std::pair<std::size_t, std::size_t> match_email_around(std::string_view text, std::size_t at_pos);

/// Whole-string checks used for validating strategy inputs.
bool is_phone(std::string_view s, char placeholder = 0);
bool is_credit_card(std::string_view s, char placeholder = 0);
bool is_email(std::string_view s);

bool is_word_start(std::string_view text, std::size_t pos);
bool is_word_end(std::string_view text, std::size_t pos);

/// 0..6 for Monday..Sunday, or -1.
int weekday_index(std::string_view word);
inline constexpr std::string_view kWeekdays[] = {"monday", "tuesday", "wednesday", "thursday",
                                                 "friday", "saturday", "sunday"};

bool is_street_suffix(std::string_view word);
bool is_state_code(std::string_view word);

}  // namespace tableguard::patterns
