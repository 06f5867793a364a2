#include <array>

#include <gtest/gtest.h>

#include "csiaug/random.hpp"

using namespace csiaug;

// Reference outputs of SplitMix64 seeded with 0 and 1234567, as published
// with the generator's reference implementation.
TEST(RandomStream, MatchesSplitMix64ReferenceSequence) {
  RandomStream zero(0);
  EXPECT_EQ(zero.next_u64(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(zero.next_u64(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(zero.next_u64(), 0x06c45d188009454fULL);

  RandomStream s(1234567);
  const std::array<std::uint64_t, 5> expected{6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL,
                                              4593380528125082431ULL, 16408922859458223821ULL};
  for (auto e : expected) EXPECT_EQ(s.next_u64(), e);
}

TEST(RandomStream, UniformIsHalfOpenUnitInterval) {
  RandomStream s(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomStream, BelowAndBetweenStayInRange) {
  RandomStream s(3);
  std::array<int, 7> seen{};
  for (int i = 0; i < 7000; ++i) {
    const auto v = s.between(-3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    ++seen[static_cast<std::size_t>(v + 3)];
  }
  for (int c : seen) EXPECT_GT(c, 800);
  EXPECT_EQ(s.below(0), 0u);
  EXPECT_EQ(s.below(1), 0u);
  EXPECT_EQ(s.between(5, 5), 5);
}

TEST(DeriveSeed, FollowsTheDocumentedRecipe) {
  const std::uint64_t parent = 42;
  std::uint64_t h = mix64(parent);
  for (std::uint64_t k : {7ULL, 9ULL}) h = mix64(h ^ mix64(k + 0x9e3779b97f4a7c15ULL));
  EXPECT_EQ(derive_seed(parent, {7, 9}), h);
  EXPECT_NE(derive_seed(parent, {7, 9}), derive_seed(parent, {9, 7}));
  EXPECT_NE(derive_seed(parent, {}), derive_seed(parent, {0}));
}

TEST(TagKey, IsFnv1a) {
  EXPECT_EQ(tag_key(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(tag_key("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(tag_key("foobar"), 0x85944171f73967e8ULL);
}
