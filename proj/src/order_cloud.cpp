#include "htisim/order_cloud.hpp"

#include <algorithm>

namespace htisim {

CloudStats cloud_update(CloudStats stats, const Order& fill) noexcept {
  if (fill.side == Side::sell) {
    stats.qty_sell += fill.quantity;
    stats.weighted_sum_sell += fill.price * fill.quantity;
  } else {
    stats.qty_buy += fill.quantity;
    stats.weighted_sum_buy += fill.price * fill.quantity;
  }
  if (stats.fill_count == 0) {
    stats.min_fill_price = stats.max_fill_price = fill.price;
  } else {
    stats.min_fill_price = std::min(stats.min_fill_price, fill.price);
    stats.max_fill_price = std::max(stats.max_fill_price, fill.price);
  }
  ++stats.fill_count;
  return stats;
}

std::optional<RationalPrice> gravity_center(const CloudStats& stats) {
  if (stats.fill_count == 0) return std::nullopt;
  return RationalPrice(stats.weighted_sum_sell + stats.weighted_sum_buy, stats.qty_sell + stats.qty_buy);
}

}  // namespace htisim
