#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>

#include "tableguard/error.hpp"
#include "tableguard/parallel.hpp"
#include "tableguard/random.hpp"
#include "tableguard/recognize.hpp"
#include "tableguard/strategies.hpp"
#include "tableguard/table.hpp"
#include "tableguard/text.hpp"

namespace tableguard {

namespace {

std::optional<int> read_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return text::is_digit(c); });
}

bool valid_date(int year, int month, int day) {
  static constexpr int kDays[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (year < 1 || month < 1 || month > 12 || day < 1) return false;
  if (day > kDays[month - 1]) return false;
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  return !(month == 2 && day == 29 && !leap);
}

std::optional<std::size_t> birth_column(const TableData& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (table.spec(c).birth_date) return c;
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto name = text::fold(table.columns[c]);
    if (name == "dob" || name == "date_of_birth" || name == "birth_date" || name == "birthdate") return c;
  }
  return std::nullopt;
}

// How one column is processed: a whole-cell entity, or recognizer spans.
struct ColumnPlan {
  bool whole_cell = false;
  EntityKind kind;
  const PolicyRule* rule = nullptr;  // whole-cell rule, if any
  bool column_rule = false;          // keys are scoped to the column
};

// A detected or whole-cell entity awaiting a cluster key.
struct CellSpan {
  std::size_t column;
  EntitySpan span;
  std::string key;
};

struct RowScan {
  std::vector<CellSpan> spans;
  std::optional<std::string> era;
};

struct ClusterBuild {
  std::set<std::pair<std::string, std::string>> forms;  // (surface, kind) members
  std::string column;  // smallest column name seen, for rule resolution
  std::map<std::string, std::size_t> eras;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t row_hash(const Row& row) {
  std::string key;
  for (const auto& cell : row) {
    key += cell ? '\x1f' + *cell : std::string("\x1e");
  }
  return fnv1a64(key);
}

}  // namespace

std::optional<int> parse_birth_year(std::string_view s) {
  const std::string t = text::collapse_whitespace(s);
  std::string_view v = t;
  if (v.size() == 10 && v[4] == '-' && v[7] == '-') {
    const auto y = v.substr(0, 4), m = v.substr(5, 2), d = v.substr(8, 2);
    if (all_digits(y) && all_digits(m) && all_digits(d)) {
      const int year = *read_int(y), month = *read_int(m), day = *read_int(d);
      if (valid_date(year, month, day)) return year;
    }
    return std::nullopt;
  }
  const auto first = v.find('/');
  const auto second = first == std::string_view::npos ? first : v.find('/', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  const auto m = v.substr(0, first), d = v.substr(first + 1, second - first - 1), y = v.substr(second + 1);
  if (m.empty() || m.size() > 2 || d.empty() || d.size() > 2 || y.size() != 4) return std::nullopt;
  if (!all_digits(m) || !all_digits(d) || !all_digits(y)) return std::nullopt;
  const int year = *read_int(y), month = *read_int(m), day = *read_int(d);
  if (!valid_date(year, month, day)) return std::nullopt;
  return year;
}

std::string era_bucket(int year) { return std::to_string(year - year % 10) + "s"; }

const Cell& RowContext::value(std::string_view column) const {
  const auto c = table->column_index(column);
  if (!c) fail(ErrorCode::InvalidInput, "no column '" + std::string(column) + "'");
  return table->rows.at(row)[*c];
}

RowContext make_row_context(const TableData& table, std::size_t row) {
  RowContext ctx;
  ctx.table = &table;
  ctx.row = row;
  if (const auto c = birth_column(table)) {
    if (const auto& cell = table.rows.at(row)[*c]) {
      ctx.birth_year = parse_birth_year(*cell);
      if (ctx.birth_year) ctx.era = era_bucket(*ctx.birth_year);
    }
  }
  return ctx;
}

std::optional<std::string> ReleaseLog::record(std::uint64_t seed, std::string_view column) {
  const int n = ++releases_[{seed, std::string(column)}];
  if (n < 2) return std::nullopt;
  return "column '" + std::string(column) + "' released " + std::to_string(n) +
         " times under the same seed; noise budgets do not compose";
}

TableObfuscation obfuscate_table(const TableData& table, const Policy& policy,
                                 const Gazetteer& gazetteer, unsigned threads, ReleaseLog* releases) {
  policy.validate();
  if (table.dictionary.columns.size() != table.columns.size()) {
    fail(ErrorCode::InvalidInput, "table dictionary does not cover every column");
  }
  const auto recognizer = make_recognizer(policy, gazetteer);
  const RecognizerConfig& config = policy.recognizer_config;
  const std::size_t ncols = table.columns.size();

  std::vector<ColumnPlan> plans(ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    const ColumnSpec& spec = table.spec(c);
    ColumnPlan& plan = plans[c];
    if (const PolicyRule* rule = policy.resolve_column(spec.name)) {
      plan.whole_cell = true;
      plan.rule = rule;
      plan.column_rule = true;
      plan.kind = spec.semantic == ColumnSemantic::Numeric ? EntityKind{KindTag::NumericValue, ""} : spec.kind;
      continue;
    }
    switch (spec.semantic) {
      case ColumnSemantic::FreeText:
        break;
      case ColumnSemantic::Numeric:
      case ColumnSemantic::Entity:
        plan.whole_cell = true;
        plan.kind = spec.semantic == ColumnSemantic::Numeric ? EntityKind{KindTag::NumericValue, ""} : spec.kind;
        plan.rule = policy.resolve(plan.kind, spec.name);
        if (!plan.rule && policy.default_action == DefaultAction::Reject) {
          fail(ErrorCode::PolicyGap, "no policy rule for column '" + spec.name + "' (" + to_string(plan.kind) + ")");
        }
        break;
    }
  }

  auto is_noise = [](const PolicyRule* rule) {
    return rule && (rule->strategy == StrategyKind::Gaussian || rule->strategy == StrategyKind::Laplace);
  };

  // Pass 1: per-row detection and content-derived cluster keys.
  std::vector<RowScan> scans(table.rows.size());
  parallel_chunks(table.rows.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const Row& row = table.rows[r];
      RowScan& scan = scans[r];
      scan.era = make_row_context(table, r).era;
      for (std::size_t c = 0; c < ncols; ++c) {
        if (!row[c]) continue;
        const std::string& cell = *row[c];
        const ColumnPlan& plan = plans[c];
        if (plan.whole_cell) {
          if (!plan.rule || plan.rule->strategy == StrategyKind::PassThrough || is_noise(plan.rule)) continue;
          EntitySpan span{0, cell.size(), plan.kind, cell, normalize_surface(plan.kind, cell), 1.0};
          std::string key = make_cluster_key(plan.kind, span.normalized);
          if (plan.column_rule) key = "column:" + table.columns[c] + "|" + key;
          scan.spans.push_back({c, std::move(span), std::move(key)});
          continue;
        }
        for (auto& span : recognize(cell, *recognizer, config).spans) {
          scan.spans.push_back({c, std::move(span), {}});
        }
      }
      // Given names join a full name in the same row with the same first token.
      for (auto& cs : scan.spans) {
        if (!cs.key.empty()) continue;
        if (cs.span.kind.tag == KindTag::GivenNameOnly) {
          for (const auto& other : scan.spans) {
            if (other.span.kind.tag != KindTag::PersonName) continue;
            const auto tokens = text::split_tokens(other.span.normalized);
            if (!tokens.empty() && tokens.front() == cs.span.normalized) {
              cs.key = make_cluster_key(other.span.kind, other.span.normalized);
              break;
            }
          }
        }
        if (cs.key.empty()) cs.key = make_cluster_key(cs.span.kind, cs.span.normalized);
      }
    }
  });

  // Clusters in key order: assignment does not depend on row order.
  std::map<std::string, ClusterBuild> builds;
  for (const auto& scan : scans) {
    for (const auto& cs : scan.spans) {
      auto& b = builds[cs.key];
      b.forms.emplace(cs.span.surface, to_string(cs.span.kind));
      const std::string& col = table.columns[cs.column];
      if (b.column.empty() || col < b.column) b.column = col;
      if (scan.era) ++b.eras[*scan.era];
    }
  }

  TableObfuscation out;
  std::vector<std::string> reserved;
  for (const auto& [key, b] : builds) {
    for (const auto& [surface, kind] : b.forms) {
      if (parse_entity_kind(kind).is_name()) reserved.push_back(surface);
    }
  }
  out.ledger.reserve_names(reserved);

  std::set<std::string> fallback_keys;
  for (const auto& [key, b] : builds) {
    EntityCluster cluster;
    cluster.cluster_key = key;
    for (const auto& [surface, kind] : b.forms) {
      const EntityKind k = parse_entity_kind(kind);
      cluster.members.push_back({0, surface.size(), k, surface, normalize_surface(k, surface), 1.0});
    }
    cluster.representative = pick_representative(cluster.members);
    AssignContext ctx;
    const bool column_scoped = key.starts_with("column:");
    if (column_scoped) ctx.column = b.column;
    if (!b.eras.empty()) {
      // Most common era; ties go to the smallest.
      auto best = b.eras.begin();
      for (auto it = b.eras.begin(); it != b.eras.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      ctx.era = best->first;
    }
    try {
      if (column_scoped) {
        // Column rules apply to the cell whatever its kind.
        const PolicyRule* rule = policy.resolve_column(b.column);
        Policy scoped;
        scoped.seed = policy.seed;
        scoped.rules.push_back({Selector{cluster.kind(), std::nullopt}, rule->strategy, rule->params});
        scoped.default_action = policy.default_action;
        out.ledger.assign(cluster, scoped, gazetteer, ctx);
      } else {
        out.ledger.assign(cluster, policy, gazetteer, ctx);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FormatMismatch && e.code() != ErrorCode::InvalidParams &&
          e.code() != ErrorCode::InsufficientGazetteer) {
        throw;
      }
      fallback_keys.insert(key);
    }
  }

  // Pass 2: rewrite rows from the frozen ledger.
  out.table = table;
  std::vector<std::size_t> replaced(table.rows.size(), 0), fallbacks(table.rows.size(), 0);
  const MaskParams full_mask{};
  parallel_chunks(table.rows.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Row& row = out.table.rows[r];
      const RowScan& scan = scans[r];
      const std::string row_key = hex64(row_hash(table.rows[r]));
      for (std::size_t c = 0; c < ncols; ++c) {
        if (!row[c] || !is_noise(plans[c].rule)) continue;
        const PolicyRule& rule = *plans[c].rule;
        const std::string& cell = *row[c];
        DeterministicStream stream(policy.seed, "numeric|" + table.columns[c] + "|" + row_key);
        try {
          const double v = parse_number(cell);
          const double noisy =
              rule.strategy == StrategyKind::Gaussian
                  ? perturb_gaussian(v, std::get<GaussianParams>(rule.params).sigma, stream)
                  : dp_laplace(v, std::get<LaplaceParams>(rule.params).epsilon,
                               std::get<LaplaceParams>(rule.params).sensitivity, stream);
          row[c] = format_like(noisy, cell);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::FormatMismatch && e.code() != ErrorCode::InvalidInput) throw;
          row[c] = mask_generic(cell, full_mask);
          ++fallbacks[r];
        }
        if (row[c] != table.rows[r][c]) ++replaced[r];
      }
      // Spans are grouped per column in ascending offset order; rewrite each
      // cell right to left.
      std::size_t i = 0;
      while (i < scan.spans.size()) {
        const std::size_t c = scan.spans[i].column;
        std::size_t j = i;
        while (j < scan.spans.size() && scan.spans[j].column == c) ++j;
        std::string cell = *table.rows[r][c];
        for (std::size_t k = j; k-- > i;) {
          const CellSpan& cs = scan.spans[k];
          std::string replacement;
          if (fallback_keys.contains(cs.key)) {
            replacement = mask_generic(cs.span.surface, full_mask);
            ++fallbacks[r];
          } else if (const LedgerEntry* entry = out.ledger.find(cs.key)) {
            replacement = render(*entry, cs.span);
          } else {
            continue;
          }
          cell.replace(cs.span.start, cs.span.length(), replacement);
        }
        if (cell != *table.rows[r][c]) ++replaced[r];
        row[c] = std::move(cell);
        i = j;
      }
    }
  });

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out.cells_replaced += replaced[r];
    out.format_fallbacks += fallbacks[r];
    out.spans_found += scans[r].spans.size();
  }
  for (std::size_t c = 0; c < ncols; ++c) {
    if (is_noise(plans[c].rule)) {
      out.spans_found += std::count_if(table.rows.begin(), table.rows.end(),
                                       [c](const Row& row) { return row[c].has_value(); });
      if (releases) {
        if (auto w = releases->record(policy.seed, table.columns[c])) out.warnings.push_back(*w);
      }
    }
  }
  out.warnings.insert(out.warnings.end(), out.ledger.warnings().begin(), out.ledger.warnings().end());
  if (out.format_fallbacks) {
    out.warnings.push_back(std::to_string(out.format_fallbacks) +
                           " value(s) did not match their column type and were fully masked");
  }
  return out;
}

}  // namespace tableguard
