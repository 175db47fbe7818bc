#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace htisim {

/// Integer index on an instrument's price tick grid.
using Ticks = std::int64_t;
using Quantity = std::int64_t;
/// Discrete tick-clock instant.
using TimeStep = std::int64_t;
using OrderId = std::uint64_t;

enum class Side { buy, sell };

/// PnL-contribution sign: +1 for a sell, -1 for a buy.
constexpr int side_sign(Side side) noexcept { return side == Side::sell ? 1 : -1; }

Side side_from_sign(int sign);
std::string_view to_string(Side side) noexcept;

/// Exact base-10 decimal: value = units / 10^scale.
///
/// Only used for instrument parameters (tick size, multiplier) and for
/// rendering money and prices at the reporting boundary. Arithmetic that
/// overflows 64 bits throws std::overflow_error.
class Decimal {
 public:
  constexpr Decimal() = default;
  constexpr Decimal(std::int64_t units, int scale) : units_(units), scale_(scale) {}

  /// Parses "12", "-0.25", "100.50". Throws std::invalid_argument.
  static Decimal parse(std::string_view text);

  std::int64_t units() const noexcept { return units_; }
  int scale() const noexcept { return scale_; }
  bool is_positive() const noexcept { return units_ > 0; }

  Decimal operator*(const Decimal& other) const;
  Decimal operator*(std::int64_t factor) const;

  /// Same value with trailing fractional zeros removed.
  Decimal normalized() const;

  std::string to_string() const;

  friend bool operator==(const Decimal& a, const Decimal& b);
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

 private:
  std::int64_t units_ = 0;
  int scale_ = 0;
};

/// Exact signed count of tick-value quanta. One quantum is the value of a
/// one-tick move on one unit of quantity; currency = quanta * multiplier * tick_size.
struct Money {
  std::int64_t quanta = 0;

  constexpr Money& operator+=(Money other) noexcept { quanta += other.quanta; return *this; }
  constexpr Money& operator-=(Money other) noexcept { quanta -= other.quanta; return *this; }
  friend constexpr Money operator+(Money a, Money b) noexcept { return Money{a.quanta + b.quanta}; }
  friend constexpr Money operator-(Money a, Money b) noexcept { return Money{a.quanta - b.quanta}; }
  friend constexpr Money operator-(Money a) noexcept { return Money{-a.quanta}; }
  friend constexpr auto operator<=>(Money, Money) = default;
};

struct Instrument {
  std::string symbol = "DEMO";
  /// Currency per price point per unit quantity (m_I).
  Decimal multiplier{1, 0};
  /// Currency value of one tick of price.
  Decimal tick_size{1, 2};
  Ticks grid_min = 9000;
  Ticks grid_max = 11000;

  bool contains(Ticks price) const noexcept { return price >= grid_min && price <= grid_max; }

  /// Throws std::invalid_argument when a field invariant fails.
  void validate() const;
};

/// One fill: (id, time, sign, price, quantity).
struct Order {
  OrderId id = 0;
  TimeStep time = 0;
  Side side = Side::buy;
  Ticks price = 0;
  Quantity quantity = 1;

  int sign() const noexcept { return side_sign(side); }
  friend bool operator==(const Order&, const Order&) = default;
};

/// Throws std::invalid_argument if the order violates its field invariants
/// or lies outside the instrument grid.
void validate_order(const Order& order, const Instrument& instrument);

/// price_ticks * tick_size. Throws std::out_of_range for off-grid prices.
Decimal price_to_currency(Ticks price_ticks, const Instrument& instrument);

/// Inverse of price_to_currency; throws std::invalid_argument when the
/// amount is not an exact multiple of the tick size.
Ticks currency_to_ticks(const Decimal& amount, const Instrument& instrument);

/// quanta * multiplier * tick_size.
Decimal money_to_currency(Money amount, const Instrument& instrument);

}  // namespace htisim
