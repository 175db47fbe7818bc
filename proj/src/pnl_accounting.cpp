#include "htisim/pnl_accounting.hpp"

#include <deque>

namespace htisim {

Quantity signed_open_position(std::span<const Order> orders) noexcept {
  Quantity pos = 0;
  for (const auto& o : orders) pos -= o.sign() * o.quantity;
  return pos;
}

Money position_value(Quantity position, Ticks price) noexcept { return Money{price * position}; }

Money pnl_direct(std::span<const Order> orders, Ticks price) noexcept {
  Money total;
  for (const auto& o : orders) total += Money{o.sign() * (o.price - price) * o.quantity};
  return total;
}

Money pnl_via_position(std::span<const Order> orders, Ticks price) noexcept {
  std::int64_t sold = 0;
  std::int64_t bought = 0;
  for (const auto& o : orders) {
    if (o.side == Side::sell) {
      sold += o.price * o.quantity;
    } else {
      bought += o.price * o.quantity;
    }
  }
  return Money{sold - bought} + position_value(signed_open_position(orders), price);
}

LotMatching match_lots(std::span<const Order> orders, MatchMethod method) {
  LotMatching out;
  // Open lots always share one sign; an opposite order consumes them.
  std::deque<UnmatchedLot> open;
  for (const auto& o : orders) {
    Quantity remaining = o.quantity;
    while (remaining > 0 && !open.empty() && open.front().sign != o.sign()) {
      UnmatchedLot& lot = method == MatchMethod::fifo ? open.front() : open.back();
      const Quantity q = std::min(remaining, lot.quantity);
      const Ticks sell = o.side == Side::sell ? o.price : lot.price;
      const Ticks buy = o.side == Side::sell ? lot.price : o.price;
      out.matches.push_back(LotMatch{sell, buy, q});
      remaining -= q;
      lot.quantity -= q;
      if (lot.quantity == 0) {
        if (method == MatchMethod::fifo) {
          open.pop_front();
        } else {
          open.pop_back();
        }
      }
    }
    if (remaining > 0) open.push_back(UnmatchedLot{o.sign(), o.price, remaining});
  }
  out.unmatched.assign(open.begin(), open.end());
  return out;
}

PnLBreakdown pnl_decomposed(std::span<const LotMatch> matches, std::span<const UnmatchedLot> unmatched,
                            Ticks price) noexcept {
  PnLBreakdown out;
  for (const auto& m : matches) out.realized += Money{(m.sell_price - m.buy_price) * m.quantity};
  for (const auto& u : unmatched) out.unrealized += Money{u.sign * (u.price - price) * u.quantity};
  out.total = out.realized + out.unrealized;
  return out;
}

}  // namespace htisim
