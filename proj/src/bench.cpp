#include "tableguard/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "tableguard/error.hpp"
#include "tableguard/random.hpp"
#include "tableguard/table.hpp"
#include "tableguard/text.hpp"

namespace tableguard {

using nlohmann::json;

namespace {

// Lower-case letters and digits only.
std::string local_part(std::string_view name) {
  std::string out;
  for (char c : text::fold(name)) {
    if (text::is_alnum(c)) out += c;
  }
  return out;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Timing summarize(std::vector<double> samples) {
  Timing t;
  if (samples.empty()) return t;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  t.median = n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  t.min = samples.front();
  t.max = samples.back();
  return t;
}

std::string digits(DeterministicStream& s, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += static_cast<char>('0' + s.next_below(10));
  return out;
}

ColumnSpec entity(std::string name, KindTag tag, bool qi = false) {
  ColumnSpec c;
  c.name = std::move(name);
  c.semantic = ColumnSemantic::Entity;
  c.kind = EntityKind{tag, ""};
  c.quasi_identifier = qi;
  return c;
}

ColumnSpec numeric(std::string name) {
  ColumnSpec c;
  c.name = std::move(name);
  c.semantic = ColumnSemantic::Numeric;
  c.kind = EntityKind{KindTag::NumericValue, ""};
  return c;
}

}  // namespace

DataDictionary synthetic_dictionary() {
  DataDictionary d;
  d.table = {"synthetic_people", "generated"};
  d.strict = true;
  d.columns.push_back(entity("name", KindTag::PersonName, true));
  auto dob = entity("dob", KindTag::DateExpression, true);
  dob.birth_date = true;
  d.columns.push_back(dob);
  d.columns.push_back(entity("phone", KindTag::PhoneNumber));
  d.columns.push_back(entity("email", KindTag::EmailAddress));
  d.columns.push_back(entity("credit_card", KindTag::CreditCardNumber));
  d.columns.push_back(numeric("amount"));
  d.columns.push_back(numeric("score"));
  return d;
}

Policy synthetic_policy(std::uint64_t seed) {
  Policy p;
  p.seed = seed;
  auto kind = [](KindTag tag) { return Selector{EntityKind{tag, ""}, std::nullopt}; };
  auto column = [](std::string name) { return Selector{std::nullopt, std::move(name)}; };
  p.rules.push_back({kind(KindTag::PersonName), StrategyKind::Surrogate, SurrogateParams{100, true, true}});
  p.rules.push_back({kind(KindTag::PhoneNumber), StrategyKind::Mask, MaskParams{}});
  p.rules.push_back({kind(KindTag::EmailAddress), StrategyKind::Mask, MaskParams{}});
  p.rules.push_back({kind(KindTag::CreditCardNumber), StrategyKind::Mask, MaskParams{}});
  p.rules.push_back({kind(KindTag::DateExpression), StrategyKind::PassThrough, {}});
  p.rules.push_back({column("amount"), StrategyKind::Gaussian, GaussianParams{5.0}});
  p.rules.push_back({column("score"), StrategyKind::Laplace, LaplaceParams{1.0, 1.0}});
  return p;
}

TableData generate_synthetic_table(std::size_t rows, std::uint64_t seed, const Gazetteer& gazetteer) {
  std::vector<const NameRecord*> firsts, lasts;
  for (const auto& r : gazetteer.records()) {
    (r.part == NamePart::First ? firsts : lasts).push_back(&r);
  }
  if (firsts.empty() || lasts.empty()) fail(ErrorCode::InsufficientGazetteer, "gazetteer has no names");

  TableData t;
  t.format = TableFormat::Csv;
  t.columns = {"name", "dob", "phone", "email", "credit_card", "amount", "score"};
  t.dictionary = synthetic_dictionary();
  DeterministicStream s(seed, "synthetic-table");
  std::unordered_set<std::string> phones;
  char buf[64];
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& first = firsts[s.next_below(firsts.size())]->name;
    const auto& last = lasts[s.next_below(lasts.size())]->name;
    const std::string name = text::title_case(first) + " " + text::title_case(last);

    const int year = 1940 + static_cast<int>(s.next_below(66));
    const int month = 1 + static_cast<int>(s.next_below(12));
    const int day = 1 + static_cast<int>(s.next_below(28));
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    const std::string dob = buf;

    std::string phone;
    do {  // unique phones keep rows distinct
      phone = std::to_string(200 + s.next_below(800)) + "-" + digits(s, 3) + "-" + digits(s, 4);
    } while (!phones.insert(phone).second);

    const std::string email = local_part(first) + "." + local_part(last) + std::to_string(s.next_below(1000)) +
                              "@example.com";
    const std::string card = "4" + digits(s, 3) + " " + digits(s, 4) + " " + digits(s, 4) + " " + digits(s, 4);
    std::snprintf(buf, sizeof buf, "%.2f", 10.0 + s.next_unit() * 9990.0);
    const std::string amount = buf;
    const std::string score = std::to_string(300 + s.next_below(551));
    t.rows.push_back({name, dob, phone, email, card, amount, score});
  }
  t.stats.rows_read = rows;
  return t;
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  if (config.trials == 0) fail(ErrorCode::InvalidInput, "trials must be at least 1");
  if (!std::is_sorted(config.row_counts.begin(), config.row_counts.end())) {
    fail(ErrorCode::InvalidInput, "row counts must be ascending");
  }
  const auto work = config.work_dir.empty() ? std::filesystem::temp_directory_path() : config.work_dir;
  std::filesystem::create_directories(work);
  const Gazetteer generator_names = Gazetteer::load(config.gazetteer);
  const DataDictionary dict = synthetic_dictionary();
  const Policy policy = synthetic_policy(config.seed);

  std::vector<BenchRow> out;
  for (const std::size_t n : config.row_counts) {
    const auto path = work / ("synthetic_" + std::to_string(n) + ".csv");
    save_table(generate_synthetic_table(n, config.seed, generator_names), path);

    std::vector<double> load, obfuscated, gaz, obf_only;
    for (unsigned trial = 0; trial < config.trials; ++trial) {
      auto t0 = Clock::now();
      const TableData plain = load_table(path, &dict);
      load.push_back(seconds_since(t0));

      t0 = Clock::now();
      const Gazetteer g = Gazetteer::load(config.gazetteer);
      gaz.push_back(seconds_since(t0));
      const TableData table = load_table(path, &dict);
      const auto t1 = Clock::now();
      const auto result = obfuscate_table(table, policy, g, config.threads);
      obf_only.push_back(seconds_since(t1));
      obfuscated.push_back(seconds_since(t0));
      if (result.table.rows.size() != plain.rows.size()) fail(ErrorCode::Internal, "row count changed");
    }
    BenchRow row;
    row.rows = n;
    row.load = summarize(load);
    row.obfuscated = summarize(obfuscated);
    row.gazetteer_load = summarize(gaz);
    const double obf = summarize(obf_only).median;
    row.obfuscation_throughput = obf > 0 ? static_cast<double>(n) / obf : 0.0;
    out.push_back(row);
  }
  return out;
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%10s  %28s  %26s  %8s  %14s  %12s\n", "Row Count",
                "With Obfuscation Load time", "No Obfuscation Load time", "Ratio", "Gazetteer (s)", "Rows/s");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%10zu  %28.4f  %26.4f  %8.2f  %14.4f  %12.0f\n", r.rows, r.obfuscated.median,
                  r.load.median, r.ratio(), r.gazetteer_load.median, r.obfuscation_throughput);
    out << buf;
  }
  return out.str();
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "rows,obfuscated_median_s,obfuscated_min_s,obfuscated_max_s,load_median_s,load_min_s,load_max_s,"
         "gazetteer_load_s,ratio,obfuscation_rows_per_s\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.4f,%.1f\n", r.rows, r.obfuscated.median,
                  r.obfuscated.min, r.obfuscated.max, r.load.median, r.load.min, r.load.max,
                  r.gazetteer_load.median, r.ratio(), r.obfuscation_throughput);
    out << buf;
  }
  return out.str();
}

json bench_json(const std::vector<BenchRow>& rows) {
  auto timing = [](const Timing& t) { return json{{"median", t.median}, {"min", t.min}, {"max", t.max}}; };
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"rows", r.rows},
                   {"obfuscated_s", timing(r.obfuscated)},
                   {"load_s", timing(r.load)},
                   {"gazetteer_load_s", timing(r.gazetteer_load)},
                   {"ratio", r.ratio()},
                   {"obfuscation_rows_per_s", r.obfuscation_throughput}});
  }
  return out;
}

}  // namespace tableguard
