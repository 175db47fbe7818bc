#pragma once

#include <optional>
#include <span>

#include "htisim/market_model.hpp"
#include "htisim/rational.hpp"

namespace htisim {

/// Gravity center values are generally off-grid; kept exact.
using RationalPrice = Rational;

/// Running totals over a strategy's filled orders (its "order cloud").
struct CloudStats {
  std::int64_t fill_count = 0;
  Quantity qty_sell = 0;
  Quantity qty_buy = 0;
  /// Sum of price * quantity per side, in tick*qty units.
  std::int64_t weighted_sum_sell = 0;
  std::int64_t weighted_sum_buy = 0;
  /// Meaningful only when fill_count >= 1.
  Ticks min_fill_price = 0;
  Ticks max_fill_price = 0;

  friend bool operator==(const CloudStats&, const CloudStats&) = default;
};

/// O(1) fold of one fill into the cloud.
CloudStats cloud_update(CloudStats stats, const Order& fill) noexcept;

/// Quantity-weighted average fill price; std::nullopt before the first fill.
std::optional<RationalPrice> gravity_center(const CloudStats& stats);

}  // namespace htisim
