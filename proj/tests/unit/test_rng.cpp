#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "htisim/rng.hpp"

namespace htisim {
namespace {

TEST(Rng, SubstreamsAreDistinctAndStable) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t master : {0ULL, 1ULL, 2ULL}) {
    for (auto s : {Substream::price, Substream::baseline, Substream::delay, Substream::hitting_time}) {
      for (std::uint64_t i = 0; i < 4; ++i) seeds.insert(derive_seed(master, s, i));
    }
  }
  EXPECT_EQ(seeds.size(), 3u * 4u * 4u);
  EXPECT_EQ(derive_seed(9, Substream::price), derive_seed(9, Substream::price));
  auto a = make_rng(9, Substream::delay);
  auto b = make_rng(9, Substream::delay);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, BernoulliDegenerateProbabilities) {
  auto rng = make_rng(1, Substream::delay);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_TRUE(bernoulli(rng, Rational(1)));
    EXPECT_FALSE(bernoulli(rng, Rational(0)));
  }
  EXPECT_THROW(bernoulli(rng, Rational(3, 2)), std::invalid_argument);
}

TEST(Rng, BernoulliRateWithinFourStandardErrors) {
  auto rng = make_rng(4, Substream::delay);
  const Rational p(3, 7);
  const int n = 1'000'000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += bernoulli(rng, p) ? 1 : 0;
  const double q = p.to_double();
  const double se = std::sqrt(q * (1 - q) / n);
  EXPECT_NEAR(static_cast<double>(hits) / n, q, 4 * se);
}

TEST(Rng, UniformBelowStaysInRange) {
  auto rng = make_rng(2, Substream::price);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 1000ULL}) {
    for (int i = 0; i < 1000; ++i) EXPECT_LT(uniform_below(rng, bound), bound);
  }
  EXPECT_THROW(uniform_below(rng, 0), std::invalid_argument);
}

}  // namespace
}  // namespace htisim
