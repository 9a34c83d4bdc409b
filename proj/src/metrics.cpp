#include "tableguard/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "tableguard/error.hpp"
#include "tableguard/strategies.hpp"

namespace tableguard {

using nlohmann::json;

namespace {

double entropy_of_counts(const std::unordered_map<std::string, std::size_t>& counts, std::size_t n) {
  if (n == 0) return 0.0;
  double h = 0.0;
  for (const auto& [_, k] : counts) {
    const double p = static_cast<double>(k) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h == 0.0 ? 0.0 : h;  // no negative zero
}

struct Summary {
  double mean = 0, std = 0, min = 0, max = 0;
};

Summary summarize(const std::vector<double>& v) {
  Summary s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

// Error relative to the statistic, or to the column's spread when the
// statistic sits near zero. Absolute when both are zero.
double relative_error(double original, double obfuscated, double scale) {
  const double diff = std::fabs(obfuscated - original);
  if (diff == 0.0) return 0.0;
  const double denom = std::max(std::fabs(original), scale);
  return denom > 0.0 ? diff / denom : diff;
}

int sign(double x) { return (x > 0) - (x < 0); }

// Paired numeric values of one column; rows null on either side are
// skipped. nullopt when a present value does not parse.
std::optional<std::pair<std::vector<double>, std::vector<double>>> numeric_pairs(const TableData& a,
                                                                                const TableData& b,
                                                                                std::size_t c) {
  std::pair<std::vector<double>, std::vector<double>> out;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    const Cell& x = a.rows[r][c];
    const Cell& y = b.rows[r][c];
    try {
      if (x && y) {
        out.first.push_back(parse_number(*x));
        out.second.push_back(parse_number(*y));
      } else if (x) {
        parse_number(*x);
      } else if (y) {
        parse_number(*y);
      }
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return out;
}

}  // namespace

double information_entropy(std::span<const std::string> values) {
  if (values.empty()) fail(ErrorCode::InvalidInput, "entropy of an empty list");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& v : values) ++counts[v];
  return entropy_of_counts(counts, values.size());
}

double column_entropy(const TableData& table, std::size_t column) {
  if (column >= table.columns.size()) fail(ErrorCode::InvalidInput, "column index out of range");
  if (table.rows.empty()) fail(ErrorCode::InvalidInput, "entropy of an empty column");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& row : table.rows) {
    // Nulls form their own value; the prefix keeps them apart from any string.
    ++counts[row[column] ? "v" + *row[column] : std::string("n")];
  }
  return entropy_of_counts(counts, table.rows.size());
}

std::size_t k_anonymity(const TableData& table, std::span<const std::string> quasi_identifiers) {
  if (table.rows.empty()) fail(ErrorCode::InvalidInput, "k-anonymity of an empty table");
  if (quasi_identifiers.empty()) fail(ErrorCode::InvalidInput, "k-anonymity needs at least one column");
  std::vector<std::size_t> cols;
  for (const auto& name : quasi_identifiers) {
    const auto c = table.column_index(name);
    if (!c) fail(ErrorCode::InvalidInput, "no column '" + name + "'");
    cols.push_back(*c);
  }
  std::unordered_map<std::string, std::size_t> groups;
  groups.reserve(table.rows.size());
  std::string key;
  for (const auto& row : table.rows) {
    key.clear();
    for (std::size_t c : cols) {
      if (row[c]) {
        key += '\x1f';
        key += *row[c];
      } else {
        key += '\x1e';
      }
    }
    ++groups[key];
  }
  std::size_t k = table.rows.size();
  for (const auto& [_, n] : groups) k = std::min(k, n);
  return k;
}

json UtilityReport::to_json() const {
  json cols = json::array();
  for (const auto& c : columns) {
    cols.push_back({{"column", c.column},
                    {"mean_error", c.mean_error},
                    {"std_error", c.std_error},
                    {"min_error", c.min_error},
                    {"max_error", c.max_error},
                    {"trend_agreement", c.trend_agreement},
                    {"values", c.values}});
  }
  return json{{"columns", cols},
              {"excluded", excluded},
              {"excluded_count", excluded.size()},
              {"information_loss_percent", information_loss_percent},
              {"information_loss_basis", "proxy: mean relative error of mean/std/min/max"}};
}

UtilityReport utility_report(const TableData& original, const TableData& obfuscated,
                             std::span<const std::string> numeric_columns) {
  if (original.columns != obfuscated.columns || original.rows.size() != obfuscated.rows.size()) {
    fail(ErrorCode::InvalidInput, "utility report needs tables of the same shape");
  }
  UtilityReport report;
  double total = 0;
  std::size_t terms = 0;
  for (const auto& name : numeric_columns) {
    const auto c = original.column_index(name);
    if (!c) fail(ErrorCode::InvalidInput, "no column '" + name + "'");
    const auto pairs = numeric_pairs(original, obfuscated, *c);
    if (!pairs || pairs->first.empty()) {
      report.excluded.push_back(name);
      continue;
    }
    const auto* a = &pairs->first;
    const auto* b = &pairs->second;
    const Summary sa = summarize(*a), sb = summarize(*b);
    ColumnUtility u;
    u.column = name;
    u.values = a->size();
    u.mean_error = relative_error(sa.mean, sb.mean, sa.std);
    u.std_error = relative_error(sa.std, sb.std, sa.std);
    u.min_error = relative_error(sa.min, sb.min, sa.std);
    u.max_error = relative_error(sa.max, sb.max, sa.std);
    std::size_t agree = 0;
    for (std::size_t i = 1; i < a->size(); ++i) {
      if (sign((*a)[i] - (*a)[i - 1]) == sign((*b)[i] - (*b)[i - 1])) ++agree;
    }
    u.trend_agreement = a->size() > 1 ? static_cast<double>(agree) / static_cast<double>(a->size() - 1) : 1.0;
    total += u.mean_error + u.std_error + u.min_error + u.max_error;
    terms += 4;
    report.columns.push_back(std::move(u));
  }
  report.information_loss_percent = terms ? 100.0 * total / static_cast<double>(terms) : 0.0;
  return report;
}

json privacy_report(const TableData& table) {
  json entropy = json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    entropy[table.columns[c]] = table.rows.empty() ? json(nullptr) : json(column_entropy(table, c));
  }
  const auto qi = table.dictionary.quasi_identifiers();
  json out{{"rows", table.rows.size()}, {"quasi_identifiers", qi}, {"entropy_bits", entropy}};
  out["k_anonymity"] = (qi.empty() || table.rows.empty()) ? json(nullptr) : json(k_anonymity(table, qi));
  return out;
}

}  // namespace tableguard
