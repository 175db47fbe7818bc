#include "htisim/rng.hpp"

#include <stdexcept>

namespace htisim {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, Substream stream, std::uint64_t index) noexcept {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  return splitmix64(h ^ index);
}

Rng make_rng(std::uint64_t master_seed, Substream stream, std::uint64_t index) {
  return Rng(derive_seed(master_seed, stream, index));
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below needs a positive bound");
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

bool bernoulli(Rng& rng, const Rational& probability) {
  if (probability < Rational(0) || probability > Rational(1)) {
    throw std::invalid_argument("probability outside [0, 1]: " + probability.to_string());
  }
  const auto den = static_cast<std::uint64_t>(probability.denominator());
  return uniform_below(rng, den) < static_cast<std::uint64_t>(probability.numerator());
}

}  // namespace htisim
