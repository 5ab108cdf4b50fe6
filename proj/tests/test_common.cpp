#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "fedscreen/canonical_json.hpp"
#include "fedscreen/errors.hpp"
#include "fedscreen/rng.hpp"

using fedscreen::canonical_dump;
using fedscreen::Json;

TEST(CanonicalJson, SortsKeysAndDropsWhitespace) {
  const Json j = {{"zeta", 1}, {"alpha", {{"b", true}, {"a", nullptr}}}, {"mid", "x"}};
  EXPECT_EQ(canonical_dump(j), R"({"alpha":{"a":null,"b":true},"mid":"x","zeta":1})");
}

TEST(CanonicalJson, DoublesAreShortestAndStayFloating) {
  EXPECT_EQ(canonical_dump(Json(0.1)), "0.1");
  EXPECT_EQ(canonical_dump(Json(2.0)), "2.0");
  EXPECT_EQ(canonical_dump(Json(-0.0)), "-0.0");
  EXPECT_EQ(canonical_dump(Json(1e300)), "1e+300");
  EXPECT_EQ(canonical_dump(Json(std::uint64_t{18446744073709551615ULL})),
            "18446744073709551615");
}

TEST(CanonicalJson, DoublesRoundTrip) {
  fedscreen::Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(rng.uniform01() - 0.5, static_cast<int>(rng.uniform_below(2000)) - 1000);
    const Json parsed = Json::parse(canonical_dump(Json(v)));
    ASSERT_TRUE(parsed.is_number_float());
    ASSERT_EQ(parsed.get<double>(), v);
  }
}

TEST(CanonicalJson, NonFiniteIsRejected) {
  EXPECT_THROW(canonical_dump(Json(std::numeric_limits<double>::infinity())),
               fedscreen::NumericError);
  EXPECT_THROW(canonical_dump(Json(std::nan(""))), fedscreen::NumericError);
}

TEST(CanonicalJson, StringsAreEscaped) {
  EXPECT_EQ(canonical_dump(Json("a\"b\n")), R"("a\"b\n")");
}

TEST(Rng, SameSeedSameStream) {
  fedscreen::Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, UniformBelowStaysInRangeAndCoversIt) {
  fedscreen::Rng rng(1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const auto v = rng.uniform_below(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(rng.uniform_below(1), 0u);
}

TEST(Rng, Uniform01InUnitInterval) {
  fedscreen::Rng rng(2);
  for (int i = 0; i < 5000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, ShuffleIsAPermutation) {
  fedscreen::Rng rng(4);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto shuffled = v;
  rng.shuffle(std::span<int>(shuffled));
  EXPECT_NE(shuffled, v);
  std::sort(shuffled.begin(), shuffled.end());
  EXPECT_EQ(shuffled, v);
}

TEST(Rng, DerivedSeedsDifferAcrossStreamsAndSeeds) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 20; ++s) {
    for (std::uint64_t k = 0; k < 20; ++k) seeds.insert(fedscreen::derive_seed(s, k));
  }
  EXPECT_EQ(seeds.size(), 400u);
  EXPECT_EQ(fedscreen::derive_seed(7, 3), fedscreen::derive_seed(7, 3));
}
