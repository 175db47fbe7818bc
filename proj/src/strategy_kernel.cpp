#include "htisim/strategy_kernel.hpp"

#include <stdexcept>

namespace htisim {

void BaselineConfig::validate() const {
  if (quantity < 1) throw std::invalid_argument("strategy quantity must be >= 1");
  if (kind == BaselineKind::bernoulli_trader &&
      (order_probability <= Rational(0) || order_probability > Rational(1))) {
    throw std::invalid_argument("order_probability must be in (0, 1]");
  }
  if (kind == BaselineKind::periodic_alternator && period < 1) {
    throw std::invalid_argument("period must be >= 1");
  }
}

namespace {

std::optional<OrderIntent> bernoulli_intent(const Rational& probability, Quantity quantity, Rng& rng) {
  if (!bernoulli(rng, probability)) return std::nullopt;
  const Side side = uniform_below(rng, 2) == 0 ? Side::buy : Side::sell;
  return OrderIntent{side, quantity};
}

std::optional<OrderIntent> periodic_intent(TimeStep period, Quantity quantity, TimeStep time) {
  if (time <= 0 || time % period != 0) return std::nullopt;
  const Side side = (time / period) % 2 == 1 ? Side::buy : Side::sell;
  return OrderIntent{side, quantity};
}

}  // namespace

std::optional<OrderIntent> baseline_on_tick(const BaselineConfig& config, Ticks /*price*/, TimeStep time, Rng& rng) {
  switch (config.kind) {
    case BaselineKind::bernoulli_trader:
      return bernoulli_intent(config.order_probability, config.quantity, rng);
    case BaselineKind::periodic_alternator:
      return periodic_intent(config.period, config.quantity, time);
  }
  return std::nullopt;
}

BernoulliTrader::BernoulliTrader(const BaselineConfig& config, std::uint64_t master_seed)
    : probability_(config.order_probability),
      quantity_(config.quantity),
      rng_(make_rng(master_seed, Substream::baseline, config.substream_index)) {
  config.validate();
}

std::optional<OrderIntent> BernoulliTrader::on_tick(Ticks /*price*/, TimeStep /*time*/) {
  return bernoulli_intent(probability_, quantity_, rng_);
}

PeriodicAlternator::PeriodicAlternator(const BaselineConfig& config)
    : period_(config.period), quantity_(config.quantity) {
  config.validate();
}

std::optional<OrderIntent> PeriodicAlternator::on_tick(Ticks /*price*/, TimeStep time) {
  return periodic_intent(period_, quantity_, time);
}

std::unique_ptr<BaselineStrategy> make_baseline(const BaselineConfig& config, std::uint64_t master_seed) {
  config.validate();
  switch (config.kind) {
    case BaselineKind::bernoulli_trader:
      return std::make_unique<BernoulliTrader>(config, master_seed);
    case BaselineKind::periodic_alternator:
      return std::make_unique<PeriodicAlternator>(config);
  }
  throw std::invalid_argument("unknown baseline kind");
}

}  // namespace htisim
