#pragma once

#include <cstdint>
#include <random>

#include "htisim/rational.hpp"

namespace htisim {

using Rng = std::mt19937_64;

/// Disjoint random substreams derived from one master seed. Each consumer
/// owns its stream, so e.g. the baseline strategy's draws never depend on
/// what the dominance engine does.
enum class Substream : std::uint64_t {
  price = 1,
  baseline = 2,
  delay = 3,
  hitting_time = 4,
};

/// SplitMix64 mix of (master, substream, index) into a generator seed.
std::uint64_t derive_seed(std::uint64_t master_seed, Substream stream, std::uint64_t index = 0) noexcept;

Rng make_rng(std::uint64_t master_seed, Substream stream, std::uint64_t index = 0);

/// Uniform integer in [0, bound). bound must be positive.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Exact Bernoulli(p) for rational p in [0, 1]: one uniform draw below the denominator.
bool bernoulli(Rng& rng, const Rational& probability);

}  // namespace htisim
