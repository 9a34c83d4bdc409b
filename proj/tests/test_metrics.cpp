#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "tableguard/error.hpp"
#include "tableguard/metrics.hpp"
#include "tableguard/strategies.hpp"
#include "tableguard/table.hpp"

using namespace tableguard;

namespace {

TableData make_table(std::vector<std::string> columns, std::vector<Row> rows) {
  TableData t;
  t.columns = std::move(columns);
  t.rows = std::move(rows);
  for (const auto& c : t.columns) t.dictionary.columns.push_back({.name = c});
  return t;
}

// Quadratic group-and-min: for every row, count rows agreeing on all QIs.
std::size_t brute_force_k(const TableData& t, const std::vector<std::string>& qi) {
  std::vector<std::size_t> idx;
  for (const auto& q : qi) idx.push_back(*t.column_index(q));
  std::size_t best = SIZE_MAX;
  for (const auto& a : t.rows) {
    std::size_t n = 0;
    for (const auto& b : t.rows) {
      bool same = true;
      for (auto c : idx) same = same && a[c] == b[c];
      n += same;
    }
    best = std::min(best, n);
  }
  return best;
}

double plain_entropy(const std::vector<double>& probabilities) {
  double h = 0;
  for (double p : probabilities) h -= p * std::log2(p);
  return h;
}

}  // namespace

TEST(Entropy, AnalyticValues) {
  const std::vector<std::string> uniform{"a", "b", "c", "d"};
  EXPECT_NEAR(information_entropy(uniform), 2.0, 1e-12);
  const std::vector<std::string> constant(7, "x");
  EXPECT_NEAR(information_entropy(constant), 0.0, 1e-12);
  const std::vector<std::string> skewed{"a", "a", "b", "c"};
  EXPECT_NEAR(information_entropy(skewed), 1.5, 1e-12);
  EXPECT_THROW(information_entropy(std::vector<std::string>{}), Error);
}

TEST(Entropy, MatchesOracleOnRandomColumns) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> v(1 + rng() % 300);
    std::map<std::string, double> counts;
    for (auto& s : v) {
      s = std::to_string(rng() % (1 + trial % 12));
      ++counts[s];
    }
    std::vector<double> p;
    for (const auto& [_, n] : counts) p.push_back(n / v.size());
    ASSERT_NEAR(information_entropy(v), plain_entropy(p), 1e-12);
  }
}

TEST(Entropy, ColumnCountsNullsAsValue) {
  const auto t = make_table({"a"}, {{"x"}, {std::nullopt}, {"y"}, {std::nullopt}});
  EXPECT_NEAR(column_entropy(t, 0), 1.5, 1e-12);
  EXPECT_THROW(column_entropy(make_table({"a"}, {}), 0), Error);
}

TEST(KAnonymity, Examples) {
  const auto five = make_table({"q", "v"}, std::vector<Row>(5, Row{"a", "1"}));
  const std::vector<std::string> q{"q"}, qv{"q", "v"};
  EXPECT_EQ(k_anonymity(five, qv), 5u);
  const auto mixed = make_table({"q", "v"}, {{"a", "1"}, {"a", "1"}, {"b", "2"}});
  EXPECT_EQ(k_anonymity(mixed, qv), 1u);
  EXPECT_EQ(k_anonymity(mixed, q), 1u);
  const auto nulls = make_table({"q"}, {{std::nullopt}, {std::nullopt}, {"a"}, {"a"}});
  EXPECT_EQ(k_anonymity(nulls, q), 2u);
  EXPECT_THROW(k_anonymity(make_table({"q"}, {}), q), Error);
  EXPECT_THROW(k_anonymity(mixed, std::vector<std::string>{}), Error);
  EXPECT_THROW(k_anonymity(mixed, std::vector<std::string>{"zzz"}), Error);
}

TEST(KAnonymity, MatchesBruteForceOracle) {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t ncols = 1 + rng() % 4, nrows = 1 + rng() % 1000;
    std::vector<std::string> cols;
    for (std::size_t c = 0; c < ncols; ++c) cols.push_back("c" + std::to_string(c));
    std::vector<Row> rows(nrows, Row(ncols));
    for (auto& row : rows) {
      for (auto& cell : row) {
        const unsigned v = rng() % (2 + trial % 6);
        if (v) cell = std::string(1, char('a' + v));
      }
    }
    const auto t = make_table(cols, rows);
    std::vector<std::string> qi(cols.begin(), cols.begin() + 1 + rng() % ncols);
    ASSERT_EQ(k_anonymity(t, qi), brute_force_k(t, qi)) << "trial " << trial;
  }
}

TEST(KAnonymity, MaskingCollapsesGroups) {
  std::vector<Row> rows;
  for (const char* n : {"Homer Simpson", "Marge Simpson", "Ned Flanders", "Tod Flanders"}) rows.push_back({n});
  const auto names = make_table({"name"}, rows);
  auto masked = names;
  for (auto& r : masked.rows) r[0] = mask_generic(*r[0], MaskParams{});
  const std::vector<std::string> qi{"name"};
  EXPECT_EQ(k_anonymity(names, qi), 1u);
  EXPECT_EQ(k_anonymity(masked, qi), 2u);
  EXPECT_LT(column_entropy(masked, 0), column_entropy(names, 0));
}

TEST(Utility, IdentityHasNoLoss) {
  const auto t = make_table({"x", "label"}, {{"1.0", "a"}, {"2.5", "b"}, {"4", "c"}, {std::nullopt, "d"}});
  const std::vector<std::string> cols{"x", "label"};
  const auto report = utility_report(t, t, cols);
  ASSERT_EQ(report.columns.size(), 1u);
  EXPECT_EQ(report.columns[0].values, 3u);
  EXPECT_EQ(report.information_loss_percent, 0.0);
  EXPECT_EQ(report.columns[0].trend_agreement, 1.0);
  EXPECT_EQ(report.excluded, (std::vector<std::string>{"label"}));
  const auto j = report.to_json();
  EXPECT_TRUE(j.contains("information_loss_percent"));
}

TEST(Utility, SmallNoiseSmallLoss) {
  std::mt19937 rng(8);
  std::normal_distribution<double> base(100.0, 10.0);
  std::vector<Row> a, b;
  DeterministicStream s(1, "utility");
  for (int i = 0; i < 20000; ++i) {
    const double v = base(rng);
    a.push_back({std::to_string(v)});
    b.push_back({std::to_string(perturb_gaussian(v, 0.1, s))});
  }
  const auto report = utility_report(make_table({"x"}, a), make_table({"x"}, b), std::vector<std::string>{"x"});
  ASSERT_EQ(report.columns.size(), 1u);
  EXPECT_LT(report.columns[0].std_error, 0.01);
  EXPECT_LT(report.columns[0].mean_error, 0.001);
  EXPECT_LT(report.information_loss_percent, 1.0);
}

// A statistic at zero is measured against the column's spread.
TEST(Utility, ZeroStatisticUsesSpread) {
  const auto a = make_table({"x"}, {{"0"}, {"10"}, {"20"}});
  const auto b = make_table({"x"}, {{"1"}, {"10"}, {"20"}});
  const auto report = utility_report(a, b, std::vector<std::string>{"x"});
  ASSERT_EQ(report.columns.size(), 1u);
  EXPECT_DOUBLE_EQ(report.columns[0].min_error, 1.0 / 10.0);
  EXPECT_DOUBLE_EQ(report.columns[0].max_error, 0.0);
  EXPECT_NEAR(report.columns[0].mean_error, (1.0 / 3.0) / 10.0, 1e-12);
  const auto c = make_table({"x"}, {{"0"}, {"0"}});
  const auto d = make_table({"x"}, {{"0.5"}, {"0.5"}});
  EXPECT_DOUBLE_EQ(utility_report(c, d, std::vector<std::string>{"x"}).columns[0].mean_error, 0.5);
}

TEST(Utility, MismatchedTablesRejected) {
  const auto a = make_table({"x"}, {{"1"}, {"2"}});
  const auto b = make_table({"x"}, {{"1"}});
  EXPECT_THROW(utility_report(a, b, std::vector<std::string>{"x"}), Error);
}

TEST(Privacy, ReportOnClaims) {
  const auto dict = DataDictionary::load(testing_support::data_path("fixtures/claims_dictionary.json"));
  const auto t = load_table(testing_support::data_path("fixtures/claims.csv"), &dict);
  const auto j = privacy_report(t);
  EXPECT_EQ(j["rows"], 12);
  EXPECT_EQ(j["k_anonymity"], 1);
  EXPECT_EQ(j["quasi_identifiers"].size(), 3u);
  const auto plain = privacy_report(make_table({"x"}, {{"a"}}));
  EXPECT_TRUE(plain["k_anonymity"].is_null());
}
