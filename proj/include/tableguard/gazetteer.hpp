#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tableguard/model.hpp"
#include "tableguard/random.hpp"

namespace tableguard {

enum class NamePart : std::uint8_t { First, Last };
enum class Gender : std::uint8_t { Male, Female, Unisex, Unknown };

std::string_view to_string(NamePart part);
std::string_view to_string(Gender gender);

struct NameRecord {
  std::string name;  // case-folded
  NamePart part = NamePart::First;
  Gender gender = Gender::Unknown;
  std::uint32_t rank = 0;  // 1 = most frequent
  std::optional<std::string> era;  // decade label such as "1970s"

  friend bool operator==(const NameRecord&, const NameRecord&) = default;
};

/// Immutable name index loaded from a TSV file with the header
/// `name part gender rank era` (tab separated, era "-" when absent).
/// Lookups are case-insensitive; records are also reachable in rank order
/// within each (part, gender) pool.
class Gazetteer {
 public:
  Gazetteer() = default;

  static Gazetteer load(const std::filesystem::path& path);
  static Gazetteer parse(std::istream& in, std::string_view source = "<stream>");

  /// First-name table first, then last-name table.
  std::optional<NameRecord> lookup(std::string_view token) const;
  const NameRecord* find(std::string_view token, NamePart part) const;

  /// A record different from `original`, drawn uniformly from the candidates
  /// within rank_band_width of its rank. When the band is empty the
  /// nearest-rank candidate is returned without consuming the stream.
  /// `era` overrides the original's era bucket for era-aware filtering.
  NameRecord pick_surrogate(const NameRecord& original, const SurrogateParams& params,
                            DeterministicStream& stream,
                            std::optional<std::string_view> era = std::nullopt) const;

  /// Uniform draw from a part (optionally one gender), skipping `exclude`.
  NameRecord pick_any(NamePart part, std::optional<Gender> gender, std::string_view exclude,
                      DeterministicStream& stream) const;

  std::size_t size() const { return records_.size(); }
  std::size_t count(NamePart part) const;
  const std::vector<NameRecord>& records() const { return records_; }

 private:
  void insert(NameRecord record, std::size_t line);
  void build_pools();
  const std::vector<std::size_t>& pool(NamePart part, std::optional<Gender> gender) const;

  std::vector<NameRecord> records_;
  std::unordered_map<std::string, std::size_t> first_index_;
  std::unordered_map<std::string, std::size_t> last_index_;
  // Indices into records_, sorted by (rank, name).
  std::map<std::pair<NamePart, std::optional<Gender>>, std::vector<std::size_t>> pools_;
  bool has_eras_ = false;
};

NameRecord lookup_or_throw(const Gazetteer& g, std::string_view token);

}  // namespace tableguard
