#include "htisim/market_model.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace htisim {

namespace {

constexpr int kMaxScale = 18;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("decimal multiplication overflows");
  return out;
}

__extension__ using Wide = __int128;

// Brings both operands to the larger scale; 128 bits so comparisons never overflow.
std::pair<Wide, Wide> aligned(const Decimal& a, const Decimal& b) {
  Wide ua = a.units();
  Wide ub = b.units();
  for (int s = a.scale(); s < b.scale(); ++s) ua *= 10;
  for (int s = b.scale(); s < a.scale(); ++s) ub *= 10;
  return {ua, ub};
}

}  // namespace

Side side_from_sign(int sign) {
  if (sign == 1) return Side::sell;
  if (sign == -1) return Side::buy;
  throw std::invalid_argument("order sign must be +1 or -1, got " + std::to_string(sign));
}

std::string_view to_string(Side side) noexcept { return side == Side::sell ? "sell" : "buy"; }

Decimal Decimal::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty decimal");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::int64_t units = 0;
  int scale = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("malformed decimal: " + std::string(text));
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("malformed decimal: " + std::string(text));
    seen_digit = true;
    units = checked_mul(units, 10);
    if (__builtin_add_overflow(units, c - '0', &units)) throw std::overflow_error("decimal too large");
    if (seen_point && ++scale > kMaxScale) throw std::invalid_argument("too many decimal places: " + std::string(text));
  }
  if (!seen_digit) throw std::invalid_argument("malformed decimal: " + std::string(text));
  return Decimal{negative ? -units : units, scale};
}

Decimal Decimal::operator*(const Decimal& other) const {
  const int scale = scale_ + other.scale_;
  Decimal out{checked_mul(units_, other.units_), scale};
  out = out.normalized();
  if (out.scale_ > kMaxScale) throw std::overflow_error("decimal scale too large");
  // Keep at least the larger input scale so 402 * 0.25 renders as 100.50.
  const int keep = std::max(scale_, other.scale_);
  while (out.scale_ < keep && out.scale_ < scale) {
    out.units_ = checked_mul(out.units_, 10);
    ++out.scale_;
  }
  return out;
}

Decimal Decimal::operator*(std::int64_t factor) const { return Decimal{checked_mul(units_, factor), scale_}; }

Decimal Decimal::normalized() const {
  Decimal out = *this;
  while (out.scale_ > 0 && out.units_ % 10 == 0) {
    out.units_ /= 10;
    --out.scale_;
  }
  return out;
}

std::string Decimal::to_string() const {
  const bool negative = units_ < 0;
  // Magnitude as unsigned so INT64_MIN renders correctly.
  const unsigned long long magnitude =
      negative ? 0ULL - static_cast<unsigned long long>(units_) : static_cast<unsigned long long>(units_);
  std::string digits = std::to_string(magnitude);
  if (scale_ > 0) {
    if (digits.size() <= static_cast<std::size_t>(scale_)) {
      digits.insert(0, static_cast<std::size_t>(scale_) - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(scale_), 1, '.');
  }
  return negative ? "-" + digits : digits;
}

bool operator==(const Decimal& a, const Decimal& b) {
  const auto [ua, ub] = aligned(a, b);
  return ua == ub;
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  const auto [ua, ub] = aligned(a, b);
  return ua <=> ub;
}

void Instrument::validate() const {
  if (!tick_size.is_positive()) throw std::invalid_argument("instrument tick_size must be > 0");
  if (!multiplier.is_positive()) throw std::invalid_argument("instrument multiplier must be > 0");
  if (grid_min >= grid_max) throw std::invalid_argument("instrument grid_min must be < grid_max");
}

void validate_order(const Order& order, const Instrument& instrument) {
  if (order.quantity < 1) throw std::invalid_argument("order quantity must be >= 1");
  if (order.time < 0) throw std::invalid_argument("order time must be non-negative");
  if (!instrument.contains(order.price)) {
    throw std::invalid_argument("order price " + std::to_string(order.price) + " outside instrument grid");
  }
}

Decimal price_to_currency(Ticks price_ticks, const Instrument& instrument) {
  if (!instrument.contains(price_ticks)) {
    throw std::out_of_range("price " + std::to_string(price_ticks) + " ticks outside instrument grid");
  }
  return instrument.tick_size * price_ticks;
}

Ticks currency_to_ticks(const Decimal& amount, const Instrument& instrument) {
  const auto [ua, ut] = aligned(amount, instrument.tick_size);
  if (ua % ut != 0) throw std::invalid_argument(amount.to_string() + " is not a multiple of the tick size");
  return static_cast<Ticks>(ua / ut);
}

Decimal money_to_currency(Money amount, const Instrument& instrument) {
  return (instrument.tick_size * instrument.multiplier) * amount.quanta;
}

}  // namespace htisim
