#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tableguard/recognize.hpp"
#include "tableguard/service.hpp"
#include "tableguard/table.hpp"

namespace testing_support {

struct SweepResult {
  std::size_t rows = 0;
  std::size_t pages = 0;
  std::size_t spans_checked = 0;
  std::vector<std::string> violations;
};

// Pages through /v1/rows and re-runs recognition on every served string.
// A covered-kind detection passes only when it comes from a surrogate rule
// and differs from every detection in the raw cell it replaced; anything a
// mask rule covers must not be detectable at all.
inline SweepResult sweep_rows(const tableguard::QueryService& service, const tableguard::TableData& raw,
                              const tableguard::Gazetteer& gazetteer, std::size_t page = 5) {
  using namespace tableguard;
  const Policy& policy = service.policy();
  const auto recognizer = make_recognizer(policy, gazetteer);
  SweepResult out;
  for (std::size_t offset = 0;; offset += page) {
    const auto res = service.handle("/v1/rows", {{"offset", std::to_string(offset)}, {"limit", std::to_string(page)}});
    if (res.status != 200) {
      out.violations.push_back("status " + std::to_string(res.status));
      return out;
    }
    const auto rows = nlohmann::json::parse(res.body);
    ++out.pages;
    if (rows.empty()) break;
    for (const auto& row : rows) {
      const std::size_t r = out.rows++;
      for (const auto& [column, value] : row.items()) {
        if (!value.is_string()) continue;
        const std::string served = value.get<std::string>();
        const auto c = raw.column_index(column);
        const Cell& original = raw.rows.at(r).at(*c);
        std::vector<std::string> raw_values;
        if (original) {
          for (const auto& s : recognize(*original, *recognizer, policy.recognizer_config).spans) {
            raw_values.push_back(s.normalized);
          }
          const ColumnSpec& spec = raw.spec(*c);
          if (spec.semantic == ColumnSemantic::Entity) {
            raw_values.push_back(normalize_surface(spec.kind, *original));
          }
        }
        for (const auto& span : recognize(served, *recognizer, policy.recognizer_config).spans) {
          if (!policy.covers(span.kind)) continue;
          ++out.spans_checked;
          const PolicyRule* rule = policy.resolve(span.kind, column);
          const bool surrogate = rule && rule->strategy == StrategyKind::Surrogate;
          bool leaked = !surrogate;
          for (const auto& v : raw_values) leaked = leaked || v == span.normalized;
          if (leaked) {
            out.violations.push_back("row " + std::to_string(r) + " column " + column + ": " + to_string(span.kind) +
                                     " '" + span.surface + "'");
          }
        }
      }
    }
  }
  return out;
}

}  // namespace testing_support
