#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tableguard/gazetteer.hpp"
#include "tableguard/model.hpp"

namespace tableguard {

inline constexpr int kMaxSurrogateRedraws = 8;

struct LedgerEntry {
  std::string cluster_key;
  EntityKind kind;
  std::string original_representative;
  std::variant<SurrogateRecord, std::string> surrogate;
  StrategyKind strategy = StrategyKind::PassThrough;
  std::uint64_t draw_count = 0;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

struct AssignContext {
  std::string_view column;
  std::optional<std::string> era;  // overrides the gazetteer era for surrogates
};

/// One surrogate per cluster for the lifetime of a run. The first assignment
/// for a cluster key wins; later calls return the stored entry. Not
/// thread-safe for assign; const members may be used concurrently.
class Ledger {
 public:
  /// Stored entry, or nullptr when the cluster passes through unchanged.
  /// Throws PolicyGap when no rule matches and the policy rejects.
  const LedgerEntry* assign(const EntityCluster& cluster, const Policy& policy,
                            const Gazetteer& gazetteer, const AssignContext& context = {});

  /// Names that surrogates should avoid (e.g. originals of other clusters).
  void reserve_names(std::span<const std::string> names);

  const LedgerEntry* find(std::string_view cluster_key) const;
  const std::deque<LedgerEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// JSON lines in first-assignment order.
  void write_jsonl(std::ostream& out) const;
  std::size_t export_jsonl(const std::filesystem::path& path) const;
  static Ledger read_jsonl(std::istream& in);
  static Ledger import_jsonl(const std::filesystem::path& path);

  friend bool operator==(const Ledger& a, const Ledger& b) { return a.entries_ == b.entries_; }

 private:
  void store(LedgerEntry entry);

  std::deque<LedgerEntry> entries_;  // stable addresses for assign()
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_set<std::string> taken_names_;  // folded full names
  std::vector<std::string> warnings_;
};

/// Text for one mention: name entries give the full surrogate to multi-token
/// mentions and the given name to single tokens; other entries are verbatim.
std::string render(const LedgerEntry& entry, const EntitySpan& span);

nlohmann::json entry_to_json(const LedgerEntry& entry);
LedgerEntry entry_from_json(const nlohmann::json& j);

}  // namespace tableguard
