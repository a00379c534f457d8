#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "prgd/rng.hpp"

namespace prgd {
namespace {

TEST(RngStream, SameSeedAndStreamGiveSameSequence) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) {
    auto da = a.next_u64();
    auto db = b.next_u64();
    ASSERT_EQ(da.value, db.value);
    a = da.next;
    b = db.next;
  }
}

TEST(RngStream, DrawingDoesNotMutate) {
  const RngStream s(1, 2);
  EXPECT_EQ(s.uniform().value, s.uniform().value);
  EXPECT_EQ(s.counter(), 0u);
  EXPECT_EQ(s.uniform().next.counter(), 1u);
}

TEST(RngStream, StreamsAndSeedsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (std::uint64_t id = 0; id < 20; ++id) firsts.insert(RngStream(seed, id).next_u64().value);
  EXPECT_EQ(firsts.size(), 400u);
}

TEST(RngStream, UniformInHalfOpenUnitInterval) {
  RngStream s(3, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    auto d = s.uniform();
    ASSERT_GE(d.value, 0.0);
    ASSERT_LT(d.value, 1.0);
    sum += d.value;
    s = d.next;
  }
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RngStream, GaussianMoments) {
  RngStream s(11, 3);
  double sum = 0.0, sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    auto d = s.gaussian();
    ASSERT_TRUE(std::isfinite(d.value));
    sum += d.value;
    sq += d.value * d.value;
    s = d.next;
  }
  EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(RngStream, SplitIsDeterministicAndDistinct) {
  const RngStream s(5, 9);
  EXPECT_EQ(s.split(1), s.split(1));
  EXPECT_NE(s.split(1).next_u64().value, s.split(2).next_u64().value);
  EXPECT_NE(s.split(0).next_u64().value, s.next_u64().value);
}

}  // namespace
}  // namespace prgd
