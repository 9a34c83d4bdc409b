#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "support.hpp"
#include "tableguard/error.hpp"
#include "tableguard/strategies.hpp"
#include "tableguard/text.hpp"

using namespace tableguard;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

// Oracle for "keep these digit ordinals": counts digits independently.
std::string keep_digits(std::string s, const std::set<int>& keep) {
  int ordinal = 0;
  for (char& c : s) {
    if (c >= '0' && c <= '9' && !keep.contains(++ordinal)) c = 'X';
  }
  return s;
}

EntityCluster name_cluster(std::vector<std::string> surfaces) {
  EntityCluster c;
  for (const auto& s : surfaces) {
    const KindTag tag = text::split_tokens(s).size() > 1 ? KindTag::PersonName : KindTag::GivenNameOnly;
    c.members.push_back({0, s.size(), {tag, ""}, s, text::fold(s), 1.0});
  }
  c.representative = pick_representative(c.members);
  c.cluster_key = make_cluster_key(c.rep().kind, c.rep().normalized);
  return c;
}

}  // namespace

TEST(Mask, PhoneGoldens) {
  EXPECT_EQ(mask_phone("555.192.9277"), "555.XXX.XXXX");
  EXPECT_EQ(mask_phone("(555) 555-1234"), "(555) XXX-XXXX");
  EXPECT_EQ(mask_phone("555-000-0000"), "555-XXX-XXXX");
  EXPECT_EQ(mask_phone("555-000-0000"), keep_digits("555-000-0000", {1, 2, 3}));
  EXPECT_EQ(code_of([] { mask_phone("hello"); }), ErrorCode::FormatMismatch);
  EXPECT_EQ(code_of([] { mask_phone("555-555-12"); }), ErrorCode::FormatMismatch);
}

TEST(Mask, CreditCardGoldens) {
  EXPECT_EQ(mask_credit_card("5423 3428 2372 9072"), "5XX3 XXXX XXXX 9072");
  EXPECT_EQ(mask_credit_card("4111 1111 1111 1111"), "4XX1 XXXX XXXX 1111");
  EXPECT_EQ(mask_credit_card("5423342823729072"), "5XX3XXXXXXXX9072");
  const std::set<int> keep{1, 4, 13, 14, 15, 16};
  EXPECT_EQ(mask_credit_card("4111-1111-1111-1111"), keep_digits("4111-1111-1111-1111", keep));
  EXPECT_EQ(code_of([] { mask_credit_card("5423 3428 2372 907"); }), ErrorCode::FormatMismatch);
}

TEST(Mask, EmailGoldens) {
  EXPECT_EQ(mask_email("homer@mrplow.com"), "xxxxx@xxxxxx.com");
  EXPECT_EQ(mask_email("a@b.org"), "x@x.org");
  EXPECT_EQ(mask_email("a.b@mail.co.uk"), "xxx@xxxx.xx.uk");
  EXPECT_EQ(code_of([] { mask_email("not-an-email"); }), ErrorCode::FormatMismatch);
}

TEST(Mask, IdGoldens) {
  EXPECT_EQ(mask_id("AB19010721", 4, 1), "AB19XXXXX1");
  EXPECT_EQ(mask_id("WILR123456", 1, 2), "WXXXXXXX56");
  EXPECT_EQ(mask_id("ABC", 1, 1, '#'), "A#C");
  EXPECT_EQ(code_of([] { mask_id("ABC", 2, 1); }), ErrorCode::InvalidParams);
  EXPECT_EQ(code_of([] { mask_id("AB\xC3\xA9" "12", 1, 1); }), ErrorCode::FormatMismatch);
}

TEST(Mask, HouseNumberGoldens) {
  EXPECT_EQ(mask_house_number("123 Any Street, Canada City, Canada"), "XXX Any Street, Canada City, Canada");
  EXPECT_EQ(mask_house_number("7 Elm St"), "X Elm St");
  EXPECT_EQ(code_of([] { mask_house_number("Elm St"); }), ErrorCode::FormatMismatch);
}

TEST(Mask, ApplyMaskDispatch) {
  const MaskParams none{};
  EXPECT_EQ(apply_mask({KindTag::PhoneNumber, ""}, "(555) 555-1234", none), "(555) XXX-XXXX");
  EXPECT_EQ(apply_mask({KindTag::EmailAddress, ""}, "homer@mrplow.com", none), "xxxxx@xxxxxx.com");
  EXPECT_EQ(apply_mask({KindTag::StreetAddress, ""}, "7 Elm St", none), "X Elm St");
  MaskParams windows;
  windows.keep_prefix = 4;
  windows.keep_suffix = 1;
  EXPECT_EQ(apply_mask({KindTag::AlphanumericId, "policy-number"}, "AB19010721", windows), "AB19XXXXX1");
  MaskParams hash;
  hash.mask_char = '#';
  EXPECT_EQ(apply_mask({KindTag::PhoneNumber, ""}, "555-555-1234", hash), "555-###-####");
  // Generic: separators pass through, windows count letters and digits.
  MaskParams generic;
  generic.keep_suffix = 2;
  EXPECT_EQ(mask_generic("C-1001", generic), "X-XX01");
  generic.preserve_separators = false;
  EXPECT_EQ(mask_generic("C-1001", generic), "XXXX01");
}

// Properties: length preserving, bytes outside mask positions unchanged,
// idempotent on phone/card/id.
TEST(Mask, RandomizedProperties) {
  std::mt19937 rng(99);
  auto digits = [&](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += char('0' + rng() % 10);
    return s;
  };
  for (int i = 0; i < 2000; ++i) {
    const std::string forms[] = {digits(3) + "." + digits(3) + "." + digits(4),
                                 "(" + digits(3) + ") " + digits(3) + "-" + digits(4),
                                 digits(3) + "-" + digits(3) + "-" + digits(4)};
    const std::string phone = forms[rng() % 3];
    const std::string masked = mask_phone(phone);
    ASSERT_EQ(masked.size(), phone.size());
    ASSERT_EQ(masked, keep_digits(phone, {1, 2, 3}));
    ASSERT_EQ(mask_phone(masked), masked);

    const char seps[] = {' ', '-', 0};
    const char sep = seps[rng() % 3];
    std::string card;
    for (int g = 0; g < 4; ++g) {
      if (g && sep) card += sep;
      card += digits(4);
    }
    const std::string mcard = mask_credit_card(card);
    ASSERT_EQ(mcard, keep_digits(card, {1, 4, 13, 14, 15, 16}));
    ASSERT_EQ(mask_credit_card(mcard), mcard);

    std::string id;
    for (int k = 0; k < 2; ++k) id += char('A' + rng() % 26);
    id += digits(8);
    const auto mid = mask_id(id, 4, 1);
    ASSERT_EQ(mid.substr(0, 4), id.substr(0, 4));
    ASSERT_EQ(mid.back(), id.back());
    ASSERT_EQ(mid.substr(4, 5), "XXXXX");
    ASSERT_EQ(mask_id(mid, 4, 1), mid);
  }
}

TEST(Noise, GaussianIdentityAndReproducibility) {
  DeterministicStream s(1, "k");
  EXPECT_EQ(perturb_gaussian(12.34, 0.0, s), 12.34);
  DeterministicStream a(5, "numeric|x"), b(5, "numeric|x");
  for (int i = 0; i < 100; ++i) ASSERT_EQ(perturb_gaussian(12.34, 0.1, a), perturb_gaussian(12.34, 0.1, b));
  EXPECT_EQ(code_of([&] { perturb_gaussian(NAN, 0.1, s); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { perturb_gaussian(INFINITY, 0.1, s); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { perturb_gaussian(1, -0.1, s); }), ErrorCode::InvalidParams);
}

TEST(Noise, GaussianMoments) {
  DeterministicStream s(2024, "gaussian-moments");
  constexpr int n = 100000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double v = perturb_gaussian(12.34, 0.1, s);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sq - n * mean * mean) / (n - 1));
  EXPECT_NEAR(mean, 12.34, 0.001);
  EXPECT_GE(sd, 0.099);
  EXPECT_LE(sd, 0.101);
}

TEST(Noise, LaplaceOracleAndMoments) {
  // Oracle: the inverse CDF written out against the same uniform.
  DeterministicStream a(8, "lap"), b(8, "lap");
  for (int i = 0; i < 1000; ++i) {
    const double u = b.next_unit();
    const double scale = 1.0 / 0.5;
    const double expected = 12.34 - scale * (u > 0.5 ? 1 : (u < 0.5 ? -1 : 0)) * std::log(1 - 2 * std::fabs(u - 0.5));
    ASSERT_DOUBLE_EQ(dp_laplace(12.34, 0.5, 1.0, a), expected);
  }
  DeterministicStream s(2024, "laplace-moments");
  constexpr int n = 100000;
  double abs_sum = 0;
  for (int i = 0; i < n; ++i) abs_sum += std::fabs(dp_laplace(12.34, 0.5, 1.0, s) - 12.34);
  EXPECT_GE(abs_sum / n, 1.96);
  EXPECT_LE(abs_sum / n, 2.04);

  DeterministicStream t(3, "tight");
  for (int i = 0; i < 10000; ++i) ASSERT_NEAR(dp_laplace(12.34, 1e6, 1.0, t), 12.34, 1e-4);
  EXPECT_EQ(code_of([&] { dp_laplace(1, 0, 1, t); }), ErrorCode::InvalidParams);
  EXPECT_EQ(code_of([&] { dp_laplace(1, 1, -1, t); }), ErrorCode::InvalidParams);
}

TEST(Numbers, ParseAndFormat) {
  EXPECT_DOUBLE_EQ(parse_number(" 12.34 "), 12.34);
  EXPECT_DOUBLE_EQ(parse_number("-3"), -3);
  EXPECT_THROW(parse_number("12a"), Error);
  EXPECT_THROW(parse_number(""), Error);
  EXPECT_EQ(format_like(12.3912, "12.34"), "12.39");
  EXPECT_EQ(format_like(12.6, "12"), "13");
  EXPECT_EQ(format_like(-0.5, "1.000"), "-0.500");
}

TEST(Surrogate, PersonNameConstraints) {
  const auto& g = testing_support::bundled_gazetteer();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto c = name_cluster({"Homer Simpson", "Homer"});
    DeterministicStream s(seed, c.cluster_key);
    const auto r = surrogate_person_name(c, g, SurrogateParams{}, s);
    const auto tokens = text::split_tokens(r.full);
    ASSERT_EQ(tokens.size(), 2u) << r.full;
    EXPECT_EQ(std::string(tokens[0]), r.given);
    EXPECT_FALSE(text::iequals(r.given, "homer"));
    EXPECT_FALSE(text::iequals(tokens[1], "simpson"));
    EXPECT_EQ(g.find(r.given, NamePart::First)->gender, Gender::Male);
    EXPECT_EQ(text::case_shape(r.given), text::CaseShape::Title);
    for (const auto& m : c.members) EXPECT_FALSE(text::iequals(m.surface, r.full));
    for (const auto& m : c.members) EXPECT_FALSE(text::iequals(m.surface, r.given));
  }
  // Single-token representative: full equals given.
  DeterministicStream s(1, "k");
  const auto single = surrogate_person_name(name_cluster({"Beth"}), g, SurrogateParams{}, s);
  EXPECT_EQ(single.full, single.given);
  // Case mirrors the original.
  DeterministicStream u(1, "k");
  const auto upper = surrogate_person_name(name_cluster({"BETH SANCHEZ"}), g, SurrogateParams{}, u);
  EXPECT_EQ(upper.full, text::upper(upper.full));
}

TEST(Surrogate, ForcedChoiceGazetteer) {
  const auto g = testing_support::gazetteer_from(
      "homer\tfirst\tmale\t1\t-\nned\tfirst\tmale\t2\t-\n"
      "simpson\tlast\tunknown\t1\t-\nflanders\tlast\tunknown\t2\t-\n");
  DeterministicStream s(77, "k");
  const auto r = surrogate_person_name(name_cluster({"Homer Simpson"}), g, SurrogateParams{}, s);
  EXPECT_EQ(r.full, "Ned Flanders");
  EXPECT_EQ(r.given, "Ned");
}

TEST(Surrogate, UnknownNamesDrawFromPools) {
  const auto& g = testing_support::bundled_gazetteer();
  DeterministicStream s(4, "k");
  const auto r = surrogate_person_name(name_cluster({"Zyx Qwerty"}), g, SurrogateParams{}, s);
  const auto tokens = text::split_tokens(r.full);
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_NE(g.find(tokens[0], NamePart::First), nullptr);
  EXPECT_NE(g.find(tokens[1], NamePart::Last), nullptr);
}

TEST(Surrogate, WeekdayDistribution) {
  std::map<std::string, int> counts;
  DeterministicStream s(42, "weekday_name|tuesday");
  for (int i = 0; i < 700; ++i) {
    const auto w = surrogate_weekday("Tuesday", s);
    ASSERT_NE(w, "Tuesday");
    ++counts[w];
  }
  EXPECT_EQ(counts.size(), 6u);
  for (const auto& [day, n] : counts) EXPECT_GE(n, 80) << day;
  DeterministicStream t(1, "k");
  const auto lower = surrogate_weekday("tuesday", t);
  EXPECT_EQ(lower, text::fold(lower));
  EXPECT_EQ(code_of([&] { surrogate_weekday("Funday", t); }), ErrorCode::FormatMismatch);
}

TEST(Strategies, ErrorsDoNotEchoValues) {
  for (const auto& fn : std::vector<std::function<void()>>{
           [] { mask_phone("Homer 555"); },
           [] { mask_email("Homer at home"); },
           [] { mask_house_number("Homer Lane"); },
           [] { DeterministicStream s(1, "k"); surrogate_weekday("Homerday", s); }}) {
    try {
      fn();
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(std::string(e.what()).find("Homer"), std::string::npos) << e.what();
    }
  }
}
