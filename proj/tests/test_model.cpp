#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "tableguard/error.hpp"
#include "tableguard/model.hpp"
#include "tableguard/serialize.hpp"
#include "tableguard/text.hpp"

using namespace tableguard;
using nlohmann::json;

TEST(Text, Helpers) {
  EXPECT_EQ(text::collapse_whitespace("  Homer  Simpson "), "Homer Simpson");
  EXPECT_EQ(text::digits_only("(555) 555-1234"), "5555551234");
  EXPECT_EQ(text::fold("HoMeR"), "homer");
  EXPECT_EQ(text::mirror_case("HOMER", "paul"), "PAUL");
  EXPECT_EQ(text::mirror_case("homer", "Paul"), "paul");
  EXPECT_EQ(text::mirror_case("Homer", "o'brien"), "O'Brien");
  EXPECT_EQ(text::split_tokens(" a  bc d ").size(), 3u);
}

TEST(EntityKind, StringRoundTrip) {
  for (KindTag tag : kAllKindTags) {
    const EntityKind k{tag, tag == KindTag::Custom ? "claim_id" : ""};
    EXPECT_EQ(parse_entity_kind(to_string(k)), k);
  }
  const EntityKind id{KindTag::AlphanumericId, "policy-number"};
  EXPECT_EQ(to_string(id), "alphanumeric_id:policy-number");
  EXPECT_EQ(parse_entity_kind("alphanumeric_id:policy-number"), id);
  EXPECT_THROW(parse_entity_kind("nonsense"), Error);
  EXPECT_THROW(parse_entity_kind("custom"), Error);
}

TEST(EntityKind, Compatibility) {
  const EntityKind full{KindTag::PersonName, ""}, given{KindTag::GivenNameOnly, ""};
  const EntityKind phone{KindTag::PhoneNumber, ""};
  EXPECT_TRUE(kinds_compatible(full, given));
  EXPECT_FALSE(kinds_compatible(full, phone));
  EXPECT_TRUE(kinds_compatible(phone, phone));
}

TEST(EntitySpan, ValidateAgainstSource) {
  const std::string src = "call (555) 555-1234 now";
  EntitySpan ok{5, 19, {KindTag::PhoneNumber, ""}, "(555) 555-1234", "5555551234", 1.0};
  EXPECT_NO_THROW(validate_span(ok, src));
  auto bad = ok;
  bad.surface = "(555) 555-1235";
  EXPECT_THROW(validate_span(bad, src), Error);
  bad = ok;
  bad.end = 100;
  EXPECT_THROW(validate_span(bad, src), Error);
  bad = ok;
  bad.start = bad.end;
  EXPECT_THROW(validate_span(bad, src), Error);
  bad = ok;
  bad.confidence = 1.5;
  EXPECT_THROW(validate_span(bad, src), Error);
}

// Property: span_less is a strict total order on distinct (start, end, kind).
TEST(EntitySpan, OrderIsTotal) {
  std::mt19937 rng(5);
  std::vector<EntitySpan> spans;
  for (int i = 0; i < 200; ++i) {
    EntitySpan s;
    s.start = rng() % 10;
    s.end = s.start + 1 + rng() % 5;
    s.kind = {kAllKindTags[rng() % std::size(kAllKindTags)], ""};
    spans.push_back(s);
  }
  for (const auto& a : spans) {
    EXPECT_FALSE(span_less(a, a));
    for (const auto& b : spans) {
      const bool same = a.start == b.start && a.end == b.end && a.kind == b.kind;
      EXPECT_EQ(span_less(a, b) || span_less(b, a), !same);
      EXPECT_FALSE(span_less(a, b) && span_less(b, a));
    }
  }
}

TEST(EntityCluster, RepresentativeIsLongestThenEarliest) {
  std::vector<EntitySpan> m{{0, 4, {KindTag::GivenNameOnly, ""}, "Beth", "beth", 0.6},
                            {10, 22, {KindTag::PersonName, ""}, "Beth Sanchez", "beth sanchez", 0.9},
                            {30, 42, {KindTag::PersonName, ""}, "BETH SANCHEZ", "beth sanchez", 0.9}};
  EXPECT_EQ(pick_representative(m), 1u);
  EXPECT_EQ(make_cluster_key({KindTag::PersonName, ""}, "beth sanchez"), "person_name|beth sanchez");
}

TEST(Policy, FirstMatchWinsAndColumnGlobs) {
  Policy p;
  p.rules.push_back({Selector{std::nullopt, "ph*"}, StrategyKind::Mask, MaskParams{}});
  p.rules.push_back({Selector{EntityKind{KindTag::PhoneNumber, ""}, std::nullopt}, StrategyKind::PassThrough, {}});
  p.rules.push_back({Selector{EntityKind{KindTag::AlphanumericId, ""}, std::nullopt}, StrategyKind::Mask, MaskParams{}});
  const EntityKind phone{KindTag::PhoneNumber, ""};
  EXPECT_EQ(p.resolve(phone, "phone")->strategy, StrategyKind::Mask);
  EXPECT_EQ(p.resolve(phone, "contact")->strategy, StrategyKind::PassThrough);
  EXPECT_EQ(p.resolve(phone)->strategy, StrategyKind::PassThrough);
  // An unqualified kind selector matches every subtype.
  EXPECT_NE(p.resolve({KindTag::AlphanumericId, "drivers-license"}), nullptr);
  EXPECT_EQ(p.resolve({KindTag::EmailAddress, ""}), nullptr);
  EXPECT_FALSE(p.covers(phone));
  EXPECT_TRUE(glob_match("a?c*", "abcdef"));
  EXPECT_FALSE(glob_match("a?c", "abcd"));
}

TEST(Policy, ValidationRejectsBadParams) {
  auto with_rule = [](StrategyKind s, StrategyParams params, KindTag tag = KindTag::NumericValue) {
    Policy p;
    p.rules.push_back({Selector{EntityKind{tag, ""}, std::nullopt}, s, std::move(params)});
    return p;
  };
  EXPECT_THROW(with_rule(StrategyKind::Gaussian, GaussianParams{-1}).validate(), Error);
  EXPECT_THROW(with_rule(StrategyKind::Laplace, LaplaceParams{0, 1}).validate(), Error);
  EXPECT_THROW(with_rule(StrategyKind::Laplace, LaplaceParams{1, 0}).validate(), Error);
  EXPECT_THROW(with_rule(StrategyKind::Surrogate, SurrogateParams{}, KindTag::PhoneNumber).validate(), Error);
  EXPECT_NO_THROW(with_rule(StrategyKind::Gaussian, GaussianParams{0}).validate());

  Policy dup;
  dup.recognizer_config.custom_patterns = {{"claim", "C-\\d+"}, {"claim", "X"}};
  EXPECT_THROW(dup.validate(), Error);
  Policy empty_label;
  empty_label.recognizer_config.custom_patterns = {{"", "x"}};
  EXPECT_THROW(empty_label.validate(), Error);
  Policy threshold;
  threshold.recognizer_config.confidence_threshold = 1.2;
  EXPECT_THROW(threshold.validate(), Error);
}

TEST(Serialize, PolicyRoundTrip) {
  const Policy p = testing_support::fnol_policy();
  const Policy back = json(p).get<Policy>();
  EXPECT_EQ(back, p);
  EXPECT_EQ(p.seed, 42u);
  const json sanitized = sanitized_policy_json(p);
  EXPECT_FALSE(sanitized.contains("seed"));
  EXPECT_EQ(sanitized.dump().find("\"seed\""), std::string::npos);
}

TEST(Serialize, SpanClusterReplacementRoundTrip) {
  const EntitySpan s{3, 8, {KindTag::AlphanumericId, "policy-number"}, "AB123", "AB123", 1.0};
  EXPECT_EQ(json(s).get<EntitySpan>(), s);
  EXPECT_EQ(json(s)["kind"], "alphanumeric_id:policy-number");

  EntityCluster c;
  c.cluster_key = "alphanumeric_id:policy-number|AB123";
  c.members = {s};
  c.representative = 0;
  c.attributes["era"] = "1950s";
  const auto cb = json(c).get<EntityCluster>();
  EXPECT_EQ(cb.cluster_key, c.cluster_key);
  EXPECT_EQ(cb.members, c.members);
  EXPECT_EQ(cb.attributes, c.attributes);

  const Replacement r{s, "ABXXX", StrategyKind::Mask};
  EXPECT_EQ(json(r).get<Replacement>(), r);
  const SurrogateRecord sr{"Paul Buchman", "Paul"};
  EXPECT_EQ(json(sr).get<SurrogateRecord>(), sr);
}

TEST(Serialize, ParamsFollowStrategy) {
  const auto mask = params_from_json(StrategyKind::Mask, json{{"keep_prefix", 4}, {"keep_suffix", 1}});
  const auto& m = std::get<MaskParams>(mask);
  EXPECT_EQ(m.keep_prefix, 4u);
  EXPECT_EQ(m.keep_suffix, 1u);
  EXPECT_EQ(params_from_json(StrategyKind::Mask, params_to_json(mask)), mask);
  const auto lap = params_from_json(StrategyKind::Laplace, json{{"epsilon", 0.5}, {"sensitivity", 1}});
  EXPECT_DOUBLE_EQ(std::get<LaplaceParams>(lap).epsilon, 0.5);
  EXPECT_THROW(params_from_json(StrategyKind::Mask, json{{"mask_char", "XY"}}), Error);
}

TEST(Serialize, PolicyParseErrors) {
  EXPECT_THROW(parse_policy("{not json"), Error);
  EXPECT_THROW(parse_policy(R"({"seed": 1, "rules": [{"kind": "bogus", "strategy": "mask"}]})"), Error);
  EXPECT_THROW(parse_policy(R"({"seed": 1, "rules": [{"strategy": "mask"}]})"), Error);
  EXPECT_THROW(parse_policy(R"({"seed": 1, "default_action": "maybe", "rules": []})"), Error);
  try {
    load_policy("/nonexistent/policy.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}
