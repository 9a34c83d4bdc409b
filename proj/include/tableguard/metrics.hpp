#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tableguard/table.hpp"

namespace tableguard {

/// Shannon entropy (bits) of the empirical distribution of values.
double information_entropy(std::span<const std::string> values);

/// Entropy of one column; nulls count as a value of their own.
double column_entropy(const TableData& table, std::size_t column);

/// Smallest equivalence class over the projection onto the given columns.
std::size_t k_anonymity(const TableData& table, std::span<const std::string> quasi_identifiers);

struct ColumnUtility {
  std::string column;
  double mean_error = 0, std_error = 0, min_error = 0, max_error = 0;  // relative
  double trend_agreement = 1.0;
  std::size_t values = 0;
};

/// Summary-statistic fidelity of the obfuscated table. information_loss is
/// the mean relative error over mean/std/min/max of every numeric column
/// (each relative to max(|statistic|, original std)),
/// as a percentage. It stands in for downstream model degradation.
struct UtilityReport {
  std::vector<ColumnUtility> columns;
  std::vector<std::string> excluded;
  double information_loss_percent = 0.0;

  nlohmann::json to_json() const;
};

UtilityReport utility_report(const TableData& original, const TableData& obfuscated,
                             std::span<const std::string> numeric_columns);

/// k-anonymity over the dictionary's quasi-identifiers plus entropy per column.
nlohmann::json privacy_report(const TableData& table);

}  // namespace tableguard
