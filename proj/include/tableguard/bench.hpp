#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tableguard/gazetteer.hpp"
#include "tableguard/model.hpp"
#include "tableguard/table.hpp"

namespace tableguard {

/// Synthetic people table: name, dob, phone, email, credit_card, amount,
/// score. Deterministic per seed.
TableData generate_synthetic_table(std::size_t rows, std::uint64_t seed, const Gazetteer& gazetteer);
DataDictionary synthetic_dictionary();
Policy synthetic_policy(std::uint64_t seed);

struct BenchConfig {
  std::vector<std::size_t> row_counts{100, 1000, 10000, 100000};
  unsigned trials = 3;
  unsigned threads = 1;
  std::uint64_t seed = 42;
  std::filesystem::path gazetteer;
  std::filesystem::path work_dir;  // synthetic files go here
};

struct Timing {
  double median = 0, min = 0, max = 0;
};

struct BenchRow {
  std::size_t rows = 0;
  Timing load;        // parse + preprocess only
  Timing obfuscated;  // gazetteer load + parse + preprocess + obfuscate
  Timing gazetteer_load;
  double ratio() const { return load.median > 0 ? obfuscated.median / load.median : 0.0; }
  /// Rows per second of the obfuscation step alone.
  double obfuscation_throughput = 0;
};

std::vector<BenchRow> run_bench(const BenchConfig& config);

std::string format_bench_table(const std::vector<BenchRow>& rows);
std::string bench_csv(const std::vector<BenchRow>& rows);
nlohmann::json bench_json(const std::vector<BenchRow>& rows);

}  // namespace tableguard
