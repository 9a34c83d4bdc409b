#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "support.hpp"
#include "tableguard/error.hpp"
#include "tableguard/gazetteer.hpp"

using namespace tableguard;
using testing_support::gazetteer_from;

namespace {

const char* kThree =
    "homer\tfirst\tmale\t412\t1950s\n"
    "beth\tfirst\tfemale\t88\t1970s\n"
    "simpson\tlast\tunknown\t733\t-\n";

ErrorCode parse_error_code(const std::string& body) {
  try {
    gazetteer_from(body);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST(Gazetteer, LoadsFixtureRecords) {
  const auto g = gazetteer_from(kThree);
  EXPECT_EQ(g.size(), 3u);
  const auto homer = g.lookup("Homer");
  ASSERT_TRUE(homer);
  EXPECT_EQ(*homer, (NameRecord{"homer", NamePart::First, Gender::Male, 412, "1950s"}));
  EXPECT_EQ(g.lookup("HOMER"), homer);
  EXPECT_FALSE(g.lookup("Zzyzx"));
  EXPECT_FALSE(g.lookup(""));
  const auto simpson = g.lookup("simpson");
  ASSERT_TRUE(simpson);
  EXPECT_EQ(simpson->part, NamePart::Last);
  EXPECT_FALSE(simpson->era);
}

TEST(Gazetteer, HeaderOnlyIsEmpty) {
  const auto g = gazetteer_from("");
  EXPECT_EQ(g.size(), 0u);
  EXPECT_FALSE(g.lookup("homer"));
}

TEST(Gazetteer, ParseErrorsNameTheLine) {
  try {
    gazetteer_from("homer\tfirst\tmale\tabc\t-\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(parse_error_code("homer\tfirst\tmale\t0\t-\n"), ErrorCode::Parse);
  EXPECT_EQ(parse_error_code("homer\tfirst\tmale\n"), ErrorCode::Parse);
  EXPECT_EQ(parse_error_code("homer\tfirst\twizard\t1\t-\n"), ErrorCode::Parse);
  EXPECT_EQ(parse_error_code("homer\tfirst\tmale\t1\t-\nhomer\tfirst\tmale\t2\t-\n"), ErrorCode::Parse);
  EXPECT_EQ(parse_error_code("homer\tfirst\tmale\t1\t-\nned\tfirst\tmale\t1\t-\n"), ErrorCode::Parse);
  // Same name as first and last is allowed.
  EXPECT_NO_THROW(gazetteer_from("paul\tfirst\tmale\t1\t-\npaul\tlast\tunknown\t1\t-\n"));
  std::istringstream no_header("homer\tfirst\tmale\t1\t-\n");
  EXPECT_THROW(Gazetteer::parse(no_header), Error);
  EXPECT_THROW(Gazetteer::load("/nonexistent/gazetteer.tsv"), Error);
}

TEST(Gazetteer, ForcedChoiceWithTwoRecords) {
  const auto g = gazetteer_from("homer\tfirst\tmale\t1\t-\nned\tfirst\tmale\t5\t-\n");
  const auto homer = *g.lookup("homer");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    DeterministicStream s(seed, "k");
    EXPECT_EQ(g.pick_surrogate(homer, SurrogateParams{}, s).name, "ned");
  }
}

TEST(Gazetteer, PoolOfOneIsInsufficient) {
  const auto g = gazetteer_from(kThree);
  DeterministicStream s(1, "k");
  try {
    g.pick_surrogate(*g.lookup("homer"), SurrogateParams{}, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientGazetteer);
  }
}

// Oracle: brute force over the pool for the smallest |rank difference|.
TEST(Gazetteer, NearestRankFallbackWhenBandEmpty) {
  const auto g = gazetteer_from(
      "al\tfirst\tmale\t10\t-\n"
      "bo\tfirst\tmale\t31\t-\n"
      "cy\tfirst\tmale\t47\t-\n"
      "di\tfirst\tmale\t60\t-\n"
      "ed\tfirst\tmale\t90\t-\n");
  SurrogateParams band0;
  band0.rank_band_width = 0;
  for (const auto& original : g.records()) {
    std::int64_t best = -1;
    std::string expected;
    for (const auto& r : g.records()) {
      if (r.name == original.name) continue;
      const auto d = std::llabs(std::int64_t(r.rank) - std::int64_t(original.rank));
      if (best < 0 || d < best) {
        best = d;
        expected = r.name;
      }
    }
    DeterministicStream s(3, original.name);
    const auto before = s.draws();
    EXPECT_EQ(g.pick_surrogate(original, band0, s).name, expected) << original.name;
    EXPECT_EQ(s.draws(), before);
  }
}

// Properties over the bundled gazetteer: never the original, gender and band
// respected, deterministic per stream state.
TEST(Gazetteer, SurrogatePropertiesOnBundledData) {
  const auto& g = testing_support::bundled_gazetteer();
  SurrogateParams params;
  params.rank_band_width = 100;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < g.records().size(); i += 7) {
    const auto& original = g.records()[i];
    DeterministicStream a(11, original.name), b(11, original.name);
    const auto pick = g.pick_surrogate(original, params, a);
    EXPECT_EQ(pick, g.pick_surrogate(original, params, b));
    EXPECT_NE(pick.name, original.name);
    EXPECT_EQ(pick.part, original.part);
    if (original.gender != Gender::Unknown) EXPECT_EQ(pick.gender, original.gender);
    EXPECT_LE(std::llabs(std::int64_t(pick.rank) - std::int64_t(original.rank)), 100) << original.name;
    ++checked;
  }
  EXPECT_GT(checked, 400u);
}

TEST(Gazetteer, BethSurrogateIsFemaleWithinBand) {
  const auto& g = testing_support::bundled_gazetteer();
  const auto beth = *g.find("beth", NamePart::First);
  EXPECT_EQ(beth.gender, Gender::Female);
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    DeterministicStream s(seed, "person_name|beth sanchez");
    const auto pick = g.pick_surrogate(beth, SurrogateParams{}, s);
    EXPECT_NE(pick.name, "beth");
    EXPECT_EQ(pick.gender, Gender::Female);
    EXPECT_GE(pick.rank, 1u);
    EXPECT_LE(pick.rank, beth.rank + 100);
    seen.insert(pick.name);
  }
  EXPECT_GT(seen.size(), 20u);
}

TEST(Gazetteer, GenderMatchOffAllowsAnyGender) {
  const auto g = gazetteer_from(
      "homer\tfirst\tmale\t1\t-\n"
      "marge\tfirst\tfemale\t1\t-\n"
      "lisa\tfirst\tfemale\t2\t-\n");
  SurrogateParams params;
  params.gender_match = false;
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    DeterministicStream s(seed, "k");
    seen.insert(g.pick_surrogate(*g.lookup("homer"), params, s).name);
  }
  EXPECT_EQ(seen, (std::set<std::string>{"marge", "lisa"}));
  DeterministicStream s(1, "k");
  EXPECT_THROW(g.pick_surrogate(*g.lookup("homer"), SurrogateParams{}, s), Error);
}

TEST(Gazetteer, EraFilterPrefersSameDecade) {
  const auto g = gazetteer_from(
      "homer\tfirst\tmale\t10\t1950s\n"
      "abe\tfirst\tmale\t11\t1950s\n"
      "bart\tfirst\tmale\t12\t1980s\n"
      "milhouse\tfirst\tmale\t13\t1980s\n");
  SurrogateParams aware;
  aware.era_aware = true;
  SurrogateParams plain;
  std::set<std::string> aware_seen, plain_seen, override_seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    DeterministicStream a(seed, "k"), b(seed, "k"), c(seed, "k");
    aware_seen.insert(g.pick_surrogate(*g.lookup("homer"), aware, a).name);
    plain_seen.insert(g.pick_surrogate(*g.lookup("homer"), plain, b).name);
    override_seen.insert(g.pick_surrogate(*g.lookup("homer"), aware, c, "1980s").name);
  }
  EXPECT_EQ(aware_seen, std::set<std::string>{"abe"});
  EXPECT_EQ(plain_seen.size(), 3u);
  EXPECT_EQ(override_seen, (std::set<std::string>{"bart", "milhouse"}));
}

TEST(Gazetteer, BundledFileHasFnolNames) {
  const auto& g = testing_support::bundled_gazetteer();
  EXPECT_EQ(g.find("homer", NamePart::First)->gender, Gender::Male);
  EXPECT_NE(g.find("sanchez", NamePart::Last), nullptr);
  EXPECT_EQ(g.find("spooner", NamePart::First), nullptr);
  EXPECT_EQ(g.find("spooner", NamePart::Last), nullptr);
  EXPECT_GT(g.count(NamePart::First), 2000u);
  EXPECT_GE(g.count(NamePart::Last), 2000u);
}
