#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "tableguard/error.hpp"
#include "tableguard/serialize.hpp"
#include "tableguard/table.hpp"
#include "tableguard/text.hpp"

namespace tableguard {

using nlohmann::json;

namespace {

std::string_view semantic_name(ColumnSemantic s) {
  switch (s) {
    case ColumnSemantic::FreeText: return "free_text";
    case ColumnSemantic::Numeric: return "numeric";
    case ColumnSemantic::Entity: return "entity";
  }
  return "free_text";
}

ColumnSemantic parse_semantic(std::string_view s) {
  if (s == "free_text") return ColumnSemantic::FreeText;
  if (s == "numeric") return ColumnSemantic::Numeric;
  if (s == "entity") return ColumnSemantic::Entity;
  fail(ErrorCode::Parse, "unknown column semantic '" + std::string(s) + "'");
}

ColumnSpec default_spec(std::string name) {
  ColumnSpec spec;
  spec.name = std::move(name);
  return spec;
}

bool is_jsonl_path(const std::filesystem::path& path) {
  const auto ext = text::fold(path.extension().string());
  return ext == ".jsonl" || ext == ".ndjson";
}

// Attaches dictionary specs in column order and applies strict-mode checks.
void bind_dictionary(TableData& table, const DataDictionary* dictionary) {
  std::set<std::string> seen;
  for (const auto& c : table.columns) {
    if (!seen.insert(c).second) fail(ErrorCode::Parse, "duplicate column '" + c + "'");
  }
  DataDictionary bound;
  if (dictionary) {
    bound.table = dictionary->table;
    bound.strict = dictionary->strict;
  }
  for (const auto& c : table.columns) {
    const ColumnSpec* spec = dictionary ? dictionary->find(c) : nullptr;
    if (!spec && dictionary && dictionary->strict) {
      fail(ErrorCode::InvalidInput, "column '" + c + "' is not in the data dictionary");
    }
    bound.columns.push_back(spec ? *spec : default_spec(c));
  }
  table.dictionary = std::move(bound);
}

std::string row_signature(const Row& row) {
  std::string key;
  for (const auto& cell : row) {
    if (cell) {
      key += '\x1f';
      key += *cell;
    } else {
      key += '\x1e';
    }
  }
  return key;
}

// Whitespace normalization, then dedup, then nulls for empty cells.
void preprocess(TableData& table) {
  for (auto& row : table.rows) {
    for (auto& cell : row) {
      if (cell) *cell = text::collapse_whitespace(*cell);
    }
  }
  std::unordered_set<std::string> seen;
  std::vector<Row> kept;
  kept.reserve(table.rows.size());
  for (auto& row : table.rows) {
    if (seen.insert(row_signature(row)).second) {
      kept.push_back(std::move(row));
    } else {
      ++table.stats.duplicates_removed;
    }
  }
  table.rows = std::move(kept);
  for (auto& row : table.rows) {
    for (auto& cell : row) {
      if (cell && cell->empty()) cell.reset();
      if (!cell) ++table.stats.missing_values;
    }
  }
}

// One RFC 4180 record; false at end of input. `line` tracks physical lines.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  ++line;
  for (;;) {
    const int ch = in.get();
    if (ch == std::char_traits<char>::eof()) {
      if (quoted) fail(ErrorCode::Parse, "line " + std::to_string(line) + ": unterminated quoted field");
      fields.push_back(std::move(field));
      return true;
    }
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get();
      fields.push_back(std::move(field));
      return true;
    } else {
      field += c;
    }
  }
}

std::string cell_from_json(const json& v, bool& numeric) {
  numeric = false;
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    numeric = true;
    return v.dump();
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos ||
         (!s.empty() && (text::is_space(s.front()) || text::is_space(s.back())));
}

}  // namespace

const ColumnSpec* DataDictionary::find(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> DataDictionary::quasi_identifiers() const {
  std::vector<std::string> out;
  for (const auto& c : columns) {
    if (c.quasi_identifier) out.push_back(c.name);
  }
  return out;
}

std::vector<std::string> DataDictionary::numeric_columns() const {
  std::vector<std::string> out;
  for (const auto& c : columns) {
    if (c.semantic == ColumnSemantic::Numeric) out.push_back(c.name);
  }
  return out;
}

DataDictionary DataDictionary::from_json(const json& j) {
  DataDictionary d;
  try {
    if (j.contains("table")) {
      const auto& t = j.at("table");
      d.table.name = t.value("name", std::string{});
      d.table.source = t.value("source", std::string{});
    }
    d.strict = j.value("strict", false);
    std::set<std::string> names;
    for (const auto& c : j.at("columns")) {
      ColumnSpec spec;
      spec.name = c.at("name").get<std::string>();
      if (spec.name.empty()) fail(ErrorCode::Parse, "column name is empty");
      if (!names.insert(spec.name).second) {
        fail(ErrorCode::Parse, "duplicate dictionary column '" + spec.name + "'");
      }
      std::optional<EntityKind> kind;
      if (c.contains("kind")) kind = c.at("kind").get<EntityKind>();
      if (c.contains("semantic")) {
        spec.semantic = parse_semantic(c.at("semantic").get<std::string>());
      } else if (kind) {
        spec.semantic = kind->tag == KindTag::NumericValue ? ColumnSemantic::Numeric : ColumnSemantic::Entity;
      }
      if (spec.semantic == ColumnSemantic::Numeric) {
        spec.kind = EntityKind{KindTag::NumericValue, ""};
      } else if (spec.semantic == ColumnSemantic::Entity) {
        if (!kind) fail(ErrorCode::Parse, "entity column '" + spec.name + "' needs a kind");
        spec.kind = *kind;
      }
      spec.description = c.value("description", std::string{});
      spec.quasi_identifier = c.value("quasi_identifier", false);
      spec.birth_date = c.value("birth_date", false);
      d.columns.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("data dictionary: ") + e.what());
  }
  return d;
}

json DataDictionary::to_json() const {
  json cols = json::array();
  for (const auto& c : columns) {
    json o{{"name", c.name}, {"semantic", semantic_name(c.semantic)}};
    if (c.semantic == ColumnSemantic::Entity) o["kind"] = c.kind;
    if (!c.description.empty()) o["description"] = c.description;
    if (c.quasi_identifier) o["quasi_identifier"] = true;
    if (c.birth_date) o["birth_date"] = true;
    cols.push_back(std::move(o));
  }
  return json{{"table", {{"name", table.name}, {"source", table.source}}}, {"strict", strict}, {"columns", cols}};
}

DataDictionary DataDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open data dictionary " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  try {
    return from_json(j);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::optional<std::size_t> TableData::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return std::nullopt;
}

TableData parse_csv(std::istream& in, const DataDictionary* dictionary) {
  const auto t0 = std::chrono::steady_clock::now();
  TableData table;
  table.format = TableFormat::Csv;
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!read_csv_record(in, fields, line)) fail(ErrorCode::Parse, "CSV input has no header");
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
  for (auto& f : fields) f = text::collapse_whitespace(f);
  table.columns = fields;
  bind_dictionary(table, dictionary);
  std::size_t record = 0;
  while (true) {
    const std::size_t start_line = line + 1;
    if (!read_csv_record(in, fields, line)) break;
    ++record;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != table.columns.size()) {
      fail(ErrorCode::Parse, "row " + std::to_string(record) + " (line " + std::to_string(start_line) +
                                 ") has " + std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(table.columns.size()));
    }
    Row row;
    row.reserve(fields.size());
    for (auto& f : fields) row.emplace_back(std::move(f));
    table.rows.push_back(std::move(row));
  }
  table.stats.rows_read = table.rows.size();
  preprocess(table);
  table.stats.parse_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return table;
}

TableData parse_jsonl(std::istream& in, const DataDictionary* dictionary) {
  const auto t0 = std::chrono::steady_clock::now();
  TableData table;
  table.format = TableFormat::JsonLines;
  std::vector<json> objects;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::collapse_whitespace(line).empty()) continue;
    try {
      auto j = json::parse(line);
      if (!j.is_object()) fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected an object");
      for (const auto& [key, _] : j.items()) {
        if (!table.column_index(key)) table.columns.push_back(key);
      }
      objects.push_back(std::move(j));
    } catch (const json::exception& e) {
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (dictionary && !dictionary->strict) {
    // Keep dictionary order for the columns it names.
    std::vector<std::string> ordered;
    for (const auto& c : dictionary->columns) {
      if (table.column_index(c.name)) ordered.push_back(c.name);
    }
    for (const auto& c : table.columns) {
      if (!dictionary->find(c)) ordered.push_back(c);
    }
    table.columns = std::move(ordered);
  }
  bind_dictionary(table, dictionary);
  table.json_numeric.assign(table.columns.size(), false);
  std::vector<bool> non_numeric(table.columns.size(), false);
  for (const auto& obj : objects) {
    Row row(table.columns.size());
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto it = obj.find(table.columns[c]);
      if (it == obj.end() || it->is_null()) continue;
      bool numeric = false;
      row[c] = cell_from_json(*it, numeric);
      if (numeric) {
        table.json_numeric[c] = true;
      } else {
        non_numeric[c] = true;
      }
    }
    table.rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (non_numeric[c]) table.json_numeric[c] = false;
  }
  table.stats.rows_read = table.rows.size();
  preprocess(table);
  table.stats.parse_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return table;
}

TableData load_table(const std::filesystem::path& path, const DataDictionary* dictionary) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open table " + path.string());
  try {
    return is_jsonl_path(path) ? parse_jsonl(in, dictionary) : parse_csv(in, dictionary);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_csv(const TableData& table, std::ostream& out) {
  auto put = [&](std::string_view s) {
    if (!needs_quotes(s)) {
      out << s;
      return;
    }
    out << '"';
    for (char c : s) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  };
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    put(table.columns[c]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      if (row[c]) put(*row[c]);
    }
    out << '\n';
  }
}

json row_to_json(const TableData& table, std::size_t r) {
  json obj = json::object();
  const Row& row = table.rows.at(r);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const Cell& cell = row[c];
    if (!cell) {
      obj[table.columns[c]] = nullptr;
      continue;
    }
    if (c < table.json_numeric.size() && table.json_numeric[c]) {
      const json parsed = json::parse(*cell, nullptr, false);
      if (parsed.is_number()) {
        obj[table.columns[c]] = parsed;
        continue;
      }
    }
    obj[table.columns[c]] = *cell;
  }
  return obj;
}

void write_jsonl(const TableData& table, std::ostream& out) {
  for (std::size_t r = 0; r < table.rows.size(); ++r) out << row_to_json(table, r).dump() << '\n';
}

void save_table(const TableData& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open output " + path.string());
  if (is_jsonl_path(path)) {
    write_jsonl(table, out);
  } else {
    write_csv(table, out);
  }
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace tableguard
