#include "tableguard/gazetteer.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <tuple>

#include "tableguard/error.hpp"
#include "tableguard/text.hpp"

namespace tableguard {

std::string_view to_string(NamePart part) { return part == NamePart::First ? "first" : "last"; }

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::Unisex: return "unisex";
    case Gender::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

[[noreturn]] void parse_error(std::string_view source, std::size_t line, const std::string& what) {
  fail(ErrorCode::Parse,
       std::string(source) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open gazetteer " + path.string());
  return parse(in, path.string());
}

Gazetteer Gazetteer::parse(std::istream& in, std::string_view source) {
  Gazetteer g;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::set<std::tuple<NamePart, Gender, std::uint32_t>> ranks;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (!header_seen) {
      const std::vector<std::string_view> expected{"name", "part", "gender", "rank", "era"};
      if (fields != expected) parse_error(source, line_no, "expected header 'name part gender rank era'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) parse_error(source, line_no, "expected 5 tab-separated fields");

    NameRecord r;
    r.name = text::fold(fields[0]);
    if (r.name.empty()) parse_error(source, line_no, "empty name");
    if (fields[1] == "first") {
      r.part = NamePart::First;
    } else if (fields[1] == "last") {
      r.part = NamePart::Last;
    } else {
      parse_error(source, line_no, "part must be 'first' or 'last'");
    }
    if (fields[2] == "male") {
      r.gender = Gender::Male;
    } else if (fields[2] == "female") {
      r.gender = Gender::Female;
    } else if (fields[2] == "unisex") {
      r.gender = Gender::Unisex;
    } else if (fields[2] == "unknown" || fields[2] == "-") {
      r.gender = Gender::Unknown;
    } else {
      parse_error(source, line_no, "unknown gender '" + std::string(fields[2]) + "'");
    }
    const auto rank_text = fields[3];
    const auto [ptr, ec] = std::from_chars(rank_text.data(), rank_text.data() + rank_text.size(), r.rank);
    if (ec != std::errc{} || ptr != rank_text.data() + rank_text.size() || r.rank == 0) {
      parse_error(source, line_no, "rank must be a positive integer, got '" + std::string(rank_text) + "'");
    }
    if (!fields[4].empty() && fields[4] != "-") r.era = std::string(fields[4]);
    if (!ranks.emplace(r.part, r.gender, r.rank).second) {
      parse_error(source, line_no, "rank " + std::to_string(r.rank) + " repeated within (" +
                                       std::string(to_string(r.part)) + ", " +
                                       std::string(to_string(r.gender)) + ")");
    }
    g.insert(std::move(r), line_no);
  }
  if (!header_seen) fail(ErrorCode::Parse, std::string(source) + ": missing header");
  g.build_pools();
  return g;
}

void Gazetteer::insert(NameRecord record, std::size_t line) {
  auto& index = record.part == NamePart::First ? first_index_ : last_index_;
  if (index.contains(record.name)) {
    fail(ErrorCode::Parse, "line " + std::to_string(line) + ": duplicate name '" + record.name +
                               "' in " + std::string(to_string(record.part)) + " table");
  }
  index.emplace(record.name, records_.size());
  records_.push_back(std::move(record));
}

void Gazetteer::build_pools() {
  pools_.clear();
  has_eras_ = false;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.era) has_eras_ = true;
    pools_[{r.part, std::nullopt}].push_back(i);
    pools_[{r.part, r.gender}].push_back(i);
  }
  for (auto& [key, pool] : pools_) {
    std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
      const auto& x = records_[a];
      const auto& y = records_[b];
      return std::tie(x.rank, x.name) < std::tie(y.rank, y.name);
    });
  }
}

const std::vector<std::size_t>& Gazetteer::pool(NamePart part, std::optional<Gender> gender) const {
  static const std::vector<std::size_t> empty;
  const auto it = pools_.find({part, gender});
  return it == pools_.end() ? empty : it->second;
}

std::size_t Gazetteer::count(NamePart part) const {
  return pool(part, std::nullopt).size();
}

const NameRecord* Gazetteer::find(std::string_view token, NamePart part) const {
  const auto& index = part == NamePart::First ? first_index_ : last_index_;
  const auto it = index.find(text::fold(token));
  return it == index.end() ? nullptr : &records_[it->second];
}

std::optional<NameRecord> Gazetteer::lookup(std::string_view token) const {
  if (token.empty()) return std::nullopt;
  if (const auto* r = find(token, NamePart::First)) return *r;
  if (const auto* r = find(token, NamePart::Last)) return *r;
  return std::nullopt;
}

NameRecord Gazetteer::pick_surrogate(const NameRecord& original, const SurrogateParams& params,
                                     DeterministicStream& stream,
                                     std::optional<std::string_view> era) const {
  std::optional<Gender> gender;
  if (params.gender_match && original.gender != Gender::Unknown) gender = original.gender;

  // Candidates in (rank, name) order; the original is skipped at use sites.
  const std::vector<std::size_t>* candidates = &pool(original.part, gender);
  const auto is_original = [&](std::size_t i) { return records_[i].name == original.name; };

  std::vector<std::size_t> same_era;
  std::optional<std::string_view> target_era = era;
  if (!target_era && original.era) target_era = *original.era;
  if (params.era_aware && target_era && has_eras_) {
    for (std::size_t i : *candidates) {
      if (!is_original(i) && (!records_[i].era || *records_[i].era == *target_era)) {
        same_era.push_back(i);
      }
    }
    if (!same_era.empty()) candidates = &same_era;
  }

  // Names are unique per part, so at most one candidate is the original.
  const bool only_original = candidates->size() == 1 && is_original(candidates->front());
  if (candidates->empty() || only_original) {
    fail(ErrorCode::InsufficientGazetteer,
         "no surrogate candidates for '" + original.name + "' (" +
             std::string(to_string(original.part)) + ", " +
             std::string(gender ? to_string(*gender) : "any") + ")");
  }

  const auto band = static_cast<std::int64_t>(params.rank_band_width);
  const auto rank = static_cast<std::int64_t>(original.rank);
  const auto rank_of = [&](std::size_t i) { return static_cast<std::int64_t>(records_[i].rank); };
  const auto lo = std::lower_bound(candidates->begin(), candidates->end(), rank - band,
                                   [&](std::size_t i, std::int64_t r) { return rank_of(i) < r; });
  const auto hi = std::upper_bound(lo, candidates->end(), rank + band,
                                   [&](std::int64_t r, std::size_t i) { return r < rank_of(i); });
  std::vector<std::size_t> in_band;
  for (auto it = lo; it != hi; ++it) {
    if (!is_original(*it)) in_band.push_back(*it);
  }
  if (!in_band.empty()) {
    return records_[in_band[stream.next_below(in_band.size())]];
  }

  // Nearest rank; ties go to the more popular (lower) rank, then the name.
  std::optional<std::size_t> best;
  for (std::size_t i : *candidates) {
    if (is_original(i)) continue;
    if (!best || std::abs(rank_of(i) - rank) < std::abs(rank_of(*best) - rank)) best = i;
  }
  return records_[*best];
}

NameRecord Gazetteer::pick_any(NamePart part, std::optional<Gender> gender, std::string_view exclude,
                               DeterministicStream& stream) const {
  const auto& candidates = pool(part, gender);
  const std::string folded = text::fold(exclude);
  const auto excluded = std::find_if(candidates.begin(), candidates.end(),
                                     [&](std::size_t i) { return records_[i].name == folded; });
  const std::size_t n = candidates.size() - (excluded == candidates.end() ? 0 : 1);
  if (n == 0) {
    fail(ErrorCode::InsufficientGazetteer,
         "no " + std::string(to_string(part)) + " names available for a surrogate");
  }
  auto pick = static_cast<std::size_t>(stream.next_below(n));
  if (excluded != candidates.end() &&
      pick >= static_cast<std::size_t>(excluded - candidates.begin())) {
    ++pick;
  }
  return records_[candidates[pick]];
}

NameRecord lookup_or_throw(const Gazetteer& g, std::string_view token) {
  auto r = g.lookup(token);
  if (!r) fail(ErrorCode::InvalidInput, "name '" + std::string(token) + "' not in gazetteer");
  return *r;
}

}  // namespace tableguard
