#pragma once

#include <memory>
#include <optional>

#include "htisim/market_model.hpp"
#include "htisim/rational.hpp"
#include "htisim/rng.hpp"

namespace htisim {

struct OrderIntent {
  Side side = Side::buy;
  Quantity quantity = 1;
  friend bool operator==(const OrderIntent&, const OrderIntent&) = default;
};

enum class BaselineKind { bernoulli_trader, periodic_alternator };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::bernoulli_trader;
  /// bernoulli_trader: chance of an intent on each tick, in (0, 1].
  Rational order_probability{1, 50};
  /// periodic_alternator: ticks between intents.
  TimeStep period = 10;
  Quantity quantity = 1;
  /// Index of the baseline substream under the master seed.
  std::uint64_t substream_index = 0;

  void validate() const;
};

/// A baseline strategy S. It sees only the market (price and clock) and its
/// own random substream; there is no channel through which fills, positions
/// or the competing strategy can reach it.
class BaselineStrategy {
 public:
  virtual ~BaselineStrategy() = default;
  virtual std::optional<OrderIntent> on_tick(Ticks price, TimeStep time) = 0;
};

/// Emits, with order_probability, an intent with a uniformly random side.
class BernoulliTrader final : public BaselineStrategy {
 public:
  BernoulliTrader(const BaselineConfig& config, std::uint64_t master_seed);
  std::optional<OrderIntent> on_tick(Ticks price, TimeStep time) override;

 private:
  Rational probability_;
  Quantity quantity_;
  Rng rng_;
};

/// Emits every `period` ticks (t > 0), alternating buy, sell, buy, ...
class PeriodicAlternator final : public BaselineStrategy {
 public:
  explicit PeriodicAlternator(const BaselineConfig& config);
  std::optional<OrderIntent> on_tick(Ticks price, TimeStep time) override;

 private:
  TimeStep period_;
  Quantity quantity_;
};

std::unique_ptr<BaselineStrategy> make_baseline(const BaselineConfig& config, std::uint64_t master_seed);

/// Stateless form: advances only `rng` (the strategy's own substream).
std::optional<OrderIntent> baseline_on_tick(const BaselineConfig& config, Ticks price, TimeStep time, Rng& rng);

}  // namespace htisim
