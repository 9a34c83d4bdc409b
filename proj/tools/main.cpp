#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tableguard/tableguard.hpp"

namespace tg = tableguard;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kPolicyGap = 3, kIo = 4 };

std::filesystem::path gazetteer_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TABLEGUARD_GAZETTEER"); env && *env) return env;
  return std::filesystem::path(TABLEGUARD_DATA_DIR) / "gazetteer.tsv";
}

bool is_table_path(const std::filesystem::path& p) {
  const auto ext = tg::text::fold(p.extension().string());
  return ext == ".csv" || ext == ".jsonl" || ext == ".ndjson";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) tg::fail(tg::ErrorCode::Io, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) tg::fail(tg::ErrorCode::Io, "cannot open output " + path);
  out << body;
  if (!out) tg::fail(tg::ErrorCode::Io, "failed writing " + path);
}

struct ObfuscateArgs {
  std::string input, policy, dictionary, output, export_ledger, import_ledger;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

int run_obfuscate(const ObfuscateArgs& a, const std::filesystem::path& gazetteer) {
  auto policy = tg::load_policy(a.policy);
  if (a.seed) policy.seed = *a.seed;
  const auto g = tg::Gazetteer::load(gazetteer);
  json summary;
  const tg::Ledger* ledger = nullptr;
  tg::ObfuscationResult doc;
  tg::TableObfuscation tab;

  if (is_table_path(a.input)) {
    std::optional<tg::DataDictionary> dict;
    if (!a.dictionary.empty()) dict = tg::DataDictionary::load(a.dictionary);
    const auto table = tg::load_table(a.input, dict ? &*dict : nullptr);
    tab = tg::obfuscate_table(table, policy, g, a.threads);
    std::ostringstream out;
    if (table.format == tg::TableFormat::JsonLines) {
      tg::write_jsonl(tab.table, out);
    } else {
      tg::write_csv(tab.table, out);
    }
    write_output(a.output, out.str());
    ledger = &tab.ledger;
    summary = {{"input", "table"},
               {"rows", tab.table.rows.size()},
               {"duplicates_removed", table.stats.duplicates_removed},
               {"missing_values", table.stats.missing_values},
               {"spans_found", tab.spans_found},
               {"replaced", tab.cells_replaced},
               {"format_fallbacks", tab.format_fallbacks},
               {"warnings", tab.warnings}};
  } else {
    tg::Ledger prior;
    if (!a.import_ledger.empty()) prior = tg::Ledger::import_jsonl(a.import_ledger);
    const tg::Engine engine(policy, g);
    const std::string text = read_file(a.input);
    doc = engine.obfuscate(text, std::move(prior));
    write_output(a.output, doc.text);
    ledger = doc.ledger.get();
    const std::size_t found = tg::recognize(text, engine.recognizer(), policy.recognizer_config).spans.size();
    summary = {{"input", "document"},
               {"spans_found", found},
               {"replaced", doc.replacements.size()},
               {"residuals", doc.residual_scan.size()},
               {"warnings", doc.warnings}};
  }
  if (!a.export_ledger.empty()) summary["ledger_entries"] = ledger->export_jsonl(a.export_ledger);
  std::cerr << summary.dump() << '\n';
  return kOk;
}

struct BenchArgs {
  std::vector<std::size_t> rows{100, 1000, 10000, 100000};
  unsigned trials = 3, threads = 1;
  std::uint64_t seed = 42;
  std::string csv, work_dir;
  bool json_out = false;
};

int run_bench(const BenchArgs& a, const std::filesystem::path& gazetteer) {
  tg::BenchConfig config;
  config.row_counts = a.rows;
  config.trials = a.trials;
  config.threads = a.threads;
  config.seed = a.seed;
  config.gazetteer = gazetteer;
  config.work_dir = a.work_dir.empty() ? std::filesystem::temp_directory_path() / "tableguard-bench"
                                       : std::filesystem::path(a.work_dir);
  const auto rows = tg::run_bench(config);
  if (!a.csv.empty()) write_output(a.csv, tg::bench_csv(rows));
  if (a.json_out) {
    std::cout << tg::bench_json(rows).dump(2) << '\n';
  } else {
    std::cout << tg::format_bench_table(rows);
  }
  return kOk;
}

struct MetricsArgs {
  std::string original, obfuscated, dictionary;
  bool json_out = false;
};

int run_metrics(const MetricsArgs& a) {
  const auto dict = tg::DataDictionary::load(a.dictionary);
  const auto original = tg::load_table(a.original, &dict);
  const auto obfuscated = tg::load_table(a.obfuscated, &dict);
  const auto numeric = dict.numeric_columns();
  const auto utility = tg::utility_report(original, obfuscated, numeric);
  const json report{{"original", tg::privacy_report(original)},
                    {"obfuscated", tg::privacy_report(obfuscated)},
                    {"utility", utility.to_json()}};
  if (a.json_out) {
    std::cout << report.dump(2) << '\n';
    return kOk;
  }
  auto k_text = [](const json& j) { return j.is_null() ? std::string("n/a") : std::to_string(j.get<std::size_t>()); };
  std::printf("k-anonymity  original %s  obfuscated %s\n", k_text(report["original"]["k_anonymity"]).c_str(),
              k_text(report["obfuscated"]["k_anonymity"]).c_str());
  std::printf("\n%-24s %12s %12s\n", "column", "H(orig)", "H(obf)");
  for (const auto& c : original.columns) {
    std::printf("%-24s %12.4f %12.4f\n", c.c_str(), report["original"]["entropy_bits"][c].get<double>(),
                report["obfuscated"]["entropy_bits"][c].get<double>());
  }
  std::printf("\n%-16s %10s %10s %10s %10s %8s\n", "numeric column", "mean err", "std err", "min err", "max err",
              "trend");
  for (const auto& u : utility.columns) {
    std::printf("%-16s %10.5f %10.5f %10.5f %10.5f %8.4f\n", u.column.c_str(), u.mean_error, u.std_error,
                u.min_error, u.max_error, u.trend_agreement);
  }
  std::printf("\ninformation loss (summary-statistic proxy): %.4f%%\n", utility.information_loss_percent);
  if (!utility.excluded.empty()) std::printf("excluded non-numeric columns: %zu\n", utility.excluded.size());
  return kOk;
}

struct ServeArgs {
  std::string table, dictionary, policy, bind = "127.0.0.1:8080";
  unsigned threads = 1;
};

int run_serve(const ServeArgs& a, const std::filesystem::path& gazetteer) {
  auto service = tg::QueryService::prepare(a.table, a.dictionary, a.policy, gazetteer);
  return tg::serve(std::move(service), a.bind, a.threads);
}

int exit_for(tg::ErrorCode code) {
  switch (code) {
    case tg::ErrorCode::PolicyGap: return kPolicyGap;
    case tg::ErrorCode::Io: return kIo;
    case tg::ErrorCode::Parse:
    case tg::ErrorCode::InvalidParams: return kUsage;
    default: return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic PII obfuscation for documents and tables"};
  app.require_subcommand(1);
  std::string gazetteer_flag;
  app.add_option("--gazetteer", gazetteer_flag, "Name gazetteer TSV (default: $TABLEGUARD_GAZETTEER or bundled)");

  ObfuscateArgs oa;
  auto* obf = app.add_subcommand("obfuscate", "Obfuscate a document (.txt) or table (.csv/.jsonl)");
  obf->add_option("--input", oa.input, "Input document or table")->required();
  obf->add_option("--policy", oa.policy, "Policy JSON")->required();
  obf->add_option("--dictionary", oa.dictionary, "Data dictionary JSON (tables)");
  obf->add_option("--output", oa.output, "Output path (default: stdout)");
  obf->add_option("--export-ledger", oa.export_ledger, "Write the surrogate ledger as JSON lines");
  obf->add_option("--import-ledger", oa.import_ledger, "Reuse surrogates from an exported ledger (documents)");
  obf->add_option("--seed", oa.seed, "Override the policy seed");
  obf->add_option("--threads", oa.threads, "Worker threads for tables")->check(CLI::PositiveNumber);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Load-time benchmark with and without obfuscation");
  bench->add_option("--rows", ba.rows, "Row counts, ascending")->delimiter(',');
  bench->add_option("--trials", ba.trials, "Trials per row count (median reported)")->check(CLI::PositiveNumber);
  bench->add_option("--threads", ba.threads, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--seed", ba.seed, "Generator and policy seed");
  bench->add_option("--csv", ba.csv, "Also write the results as CSV");
  bench->add_option("--work-dir", ba.work_dir, "Directory for generated tables");
  bench->add_flag("--json", ba.json_out, "JSON on stdout instead of a table");

  MetricsArgs ma;
  auto* metrics = app.add_subcommand("metrics", "k-anonymity, entropy and utility of an obfuscated table");
  metrics->add_option("--original", ma.original, "Original table")->required();
  metrics->add_option("--obfuscated", ma.obfuscated, "Obfuscated table")->required();
  metrics->add_option("--dictionary", ma.dictionary, "Data dictionary JSON")->required();
  metrics->add_flag("--json", ma.json_out, "JSON on stdout instead of tables");

  ServeArgs sa;
  auto* serve = app.add_subcommand("serve", "Serve an obfuscated view of a table over HTTP");
  serve->add_option("--table", sa.table, "Table to serve")->required();
  serve->add_option("--dictionary", sa.dictionary, "Data dictionary JSON")->required();
  serve->add_option("--policy", sa.policy, "Policy JSON")->required();
  serve->add_option("--bind", sa.bind, "host:port")->capture_default_str();
  serve->add_option("--threads", sa.threads, "Worker threads for the load")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const auto gazetteer = gazetteer_path(gazetteer_flag);
    if (*obf) return run_obfuscate(oa, gazetteer);
    if (*bench) return run_bench(ba, gazetteer);
    if (*metrics) return run_metrics(ma);
    if (*serve) return run_serve(sa, gazetteer);
  } catch (const tg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
