#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tableguard/gazetteer.hpp"
#include "tableguard/ledger.hpp"
#include "tableguard/model.hpp"

namespace tableguard {

enum class ColumnSemantic : std::uint8_t { FreeText, Numeric, Entity };

struct ColumnSpec {
  std::string name;
  ColumnSemantic semantic = ColumnSemantic::FreeText;
  EntityKind kind{KindTag::Custom, "free_text"};  // meaningful for Entity; NumericValue for Numeric
  std::string description;
  bool quasi_identifier = false;
  bool birth_date = false;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

struct TableMetadata {
  std::string name;
  std::string source;
  friend bool operator==(const TableMetadata&, const TableMetadata&) = default;
};

/// Column semantics plus table metadata. Columns missing from the dictionary
/// default to free text unless `strict` is set.
struct DataDictionary {
  std::vector<ColumnSpec> columns;
  TableMetadata table;
  bool strict = false;

  const ColumnSpec* find(std::string_view name) const;
  std::vector<std::string> quasi_identifiers() const;
  std::vector<std::string> numeric_columns() const;

  static DataDictionary load(const std::filesystem::path& path);
  static DataDictionary from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  friend bool operator==(const DataDictionary&, const DataDictionary&) = default;
};

/// A missing value is std::nullopt, never an empty string.
using Cell = std::optional<std::string>;
using Row = std::vector<Cell>;

enum class TableFormat : std::uint8_t { Csv, JsonLines };

struct LoadStats {
  std::size_t rows_read = 0;
  std::size_t duplicates_removed = 0;
  std::size_t missing_values = 0;
  double parse_seconds = 0.0;
};

struct TableData {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  DataDictionary dictionary;  // one spec per column, in column order
  TableFormat format = TableFormat::Csv;
  std::vector<bool> json_numeric;  // JSONL: column held JSON numbers
  LoadStats stats;

  std::optional<std::size_t> column_index(std::string_view name) const;
  const ColumnSpec& spec(std::size_t column) const { return dictionary.columns.at(column); }

  friend bool operator==(const TableData& a, const TableData& b) {
    return a.columns == b.columns && a.rows == b.rows;
  }
};

/// Reads CSV (RFC 4180) or JSON lines, chosen by extension (.jsonl/.ndjson
/// are JSON lines). Preprocessing, in this order: collapse whitespace in
/// every cell, drop exact duplicate rows (first kept), record empty cells
/// as nulls.
TableData load_table(const std::filesystem::path& path, const DataDictionary* dictionary = nullptr);
TableData parse_csv(std::istream& in, const DataDictionary* dictionary = nullptr);
TableData parse_jsonl(std::istream& in, const DataDictionary* dictionary = nullptr);

void write_csv(const TableData& table, std::ostream& out);
void write_jsonl(const TableData& table, std::ostream& out);
void save_table(const TableData& table, const std::filesystem::path& path);
nlohmann::json row_to_json(const TableData& table, std::size_t row);

/// Era of a DOB string: ISO YYYY-MM-DD or MM/DD/YYYY.
std::optional<int> parse_birth_year(std::string_view text);
std::string era_bucket(int year);

struct RowContext {
  const TableData* table = nullptr;
  std::size_t row = 0;
  std::optional<int> birth_year;
  std::optional<std::string> era;

  const Cell& value(std::string_view column) const;
};

RowContext make_row_context(const TableData& table, std::size_t row);

/// Counts releases of noise-protected columns under one seed. The noise
/// mechanisms do not compose budgets; a repeated release only warns.
class ReleaseLog {
 public:
  /// Returns a warning message when (seed, column) was already released.
  std::optional<std::string> record(std::uint64_t seed, std::string_view column);

 private:
  std::map<std::pair<std::uint64_t, std::string>, int> releases_;
};

struct TableObfuscation {
  TableData table;
  Ledger ledger;
  std::size_t cells_replaced = 0;
  std::size_t spans_found = 0;
  std::size_t format_fallbacks = 0;
  std::vector<std::string> warnings;
};

/// Per-column policy application with one table-wide ledger. Cluster keys
/// are content-derived and ledger assignment runs in key order, so output
/// rows do not depend on input row order or thread count.
TableObfuscation obfuscate_table(const TableData& table, const Policy& policy,
                                 const Gazetteer& gazetteer, unsigned threads = 1,
                                 ReleaseLog* releases = nullptr);

}  // namespace tableguard
