#pragma once

#include <span>
#include <vector>

#include "htisim/market_model.hpp"

// Exact PnL in the direct form, the position form, and the realized/unrealized
// decomposition under a lot-matching method. All three agree to the quantum.
//
// Money is expressed in tick-value quanta, so the multiplier never enters
// these functions; it is applied when rendering to currency.

namespace htisim {

enum class MatchMethod { fifo, lifo };

struct LotMatch {
  Ticks sell_price = 0;
  Ticks buy_price = 0;
  Quantity quantity = 0;
  friend bool operator==(const LotMatch&, const LotMatch&) = default;
};

/// Residual open quantity after matching. All unmatched lots of one result share a sign.
struct UnmatchedLot {
  int sign = 1;
  Ticks price = 0;
  Quantity quantity = 0;
  friend bool operator==(const UnmatchedLot&, const UnmatchedLot&) = default;
};

struct LotMatching {
  std::vector<LotMatch> matches;
  std::vector<UnmatchedLot> unmatched;
};

struct PnLBreakdown {
  Money realized;
  Money unrealized;
  Money total;
};

/// Bought minus sold quantity.
Quantity signed_open_position(std::span<const Order> orders) noexcept;

/// Mark-to-market value of a signed position at `price`.
Money position_value(Quantity position, Ticks price) noexcept;

/// sum over orders of s_h * (p_h - P) * q_h.
Money pnl_direct(std::span<const Order> orders, Ticks price) noexcept;

/// Sold value minus bought value plus the open position marked at `price`.
Money pnl_via_position(std::span<const Order> orders, Ticks price) noexcept;

/// Greedy lot matching in time order; partial lots are split and the
/// remainder stays open. FIFO consumes the oldest open lot first, LIFO the newest.
LotMatching match_lots(std::span<const Order> orders, MatchMethod method);

PnLBreakdown pnl_decomposed(std::span<const LotMatch> matches, std::span<const UnmatchedLot> unmatched,
                            Ticks price) noexcept;

/// Running cash and position so a strategy's PnL can be marked every tick in O(1).
/// Algebraically the same as pnl_via_position over the orders added so far.
class PnlLedger {
 public:
  void add(const Order& fill) noexcept {
    cash_ += Money{fill.sign() * fill.price * fill.quantity};
    position_ -= fill.sign() * fill.quantity;
    traded_ += fill.quantity;
  }

  Money pnl(Ticks price) const noexcept { return cash_ + position_value(position_, price); }
  Money cash() const noexcept { return cash_; }
  Quantity position() const noexcept { return position_; }
  Quantity traded_quantity() const noexcept { return traded_; }

 private:
  Money cash_;
  Quantity position_ = 0;
  Quantity traded_ = 0;
};

}  // namespace htisim
