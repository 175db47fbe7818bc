#pragma once

#include <cstdint>
#include <deque>
#include <numeric>
#include <random>
#include <vector>

#include "htisim/market_model.hpp"

namespace htisim::testing {

__extension__ using Wide = __int128;

inline std::vector<Order> random_orders(std::mt19937_64& gen, int max_orders, Ticks lo, Ticks hi, Quantity max_qty) {
  std::uniform_int_distribution<int> count(0, max_orders);
  std::uniform_int_distribution<Ticks> price(lo, hi);
  std::uniform_int_distribution<Quantity> qty(1, max_qty);
  std::bernoulli_distribution sell(0.5);
  std::vector<Order> out;
  const int n = count(gen);
  for (int i = 0; i < n; ++i) {
    out.push_back(Order{static_cast<OrderId>(i + 1), i, sell(gen) ? Side::sell : Side::buy, price(gen), qty(gen)});
  }
  return out;
}

/// Realized and unrealized PnL by matching one unit at a time.
struct UnitMatchOracle {
  Wide realized = 0;
  Wide unrealized = 0;
  std::int64_t open_units = 0;
};

inline UnitMatchOracle unit_match(const std::vector<Order>& orders, bool fifo, Ticks mark) {
  struct Unit {
    int sign;
    Ticks price;
  };
  std::deque<Unit> open;
  UnitMatchOracle out;
  for (const auto& o : orders) {
    for (Quantity u = 0; u < o.quantity; ++u) {
      if (!open.empty() && open.front().sign != o.sign()) {
        const Unit other = fifo ? open.front() : open.back();
        if (fifo) {
          open.pop_front();
        } else {
          open.pop_back();
        }
        const Ticks sell = o.sign() > 0 ? o.price : other.price;
        const Ticks buy = o.sign() > 0 ? other.price : o.price;
        out.realized += sell - buy;
      } else {
        open.push_back(Unit{o.sign(), o.price});
      }
    }
  }
  for (const auto& u : open) out.unrealized += static_cast<Wide>(u.sign) * (u.price - mark);
  out.open_units = static_cast<std::int64_t>(open.size());
  return out;
}

/// Reduced fraction (num, den) from 128-bit sums.
struct Fraction {
  Wide num;
  Wide den;
};

inline Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Fraction reduce(Wide num, Wide den) {
  const Wide g = wide_gcd(num, den);
  return {num / g, den / g};
}

}  // namespace htisim::testing
