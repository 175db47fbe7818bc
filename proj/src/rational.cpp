#include "htisim/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "htisim/market_model.hpp"

namespace htisim {

namespace {

__extension__ using Wide = __int128;

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(Wide value) {
  if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational arithmetic overflows 64 bits");
  }
  return static_cast<std::int64_t>(value);
}

Rational reduce(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  Wide num = numerator;
  Wide den = denominator;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = narrow(num);
  den_ = narrow(den);
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const Decimal num = Decimal::parse(text.substr(0, slash));
    const Decimal den = Decimal::parse(text.substr(slash + 1));
    if (num.scale() != 0 || den.scale() != 0) {
      throw std::invalid_argument("fraction parts must be integers: " + std::string(text));
    }
    return Rational(num.units(), den.units());
  }
  const Decimal value = Decimal::parse(text);
  std::int64_t den = 1;
  for (int i = 0; i < value.scale(); ++i) den *= 10;
  return Rational(value.units(), den);
}

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return reduce(-Wide{num_}, den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return reduce(Wide{a.num_} * b.den_ + Wide{b.num_} * a.den_, Wide{a.den_} * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return reduce(Wide{a.num_} * b.den_ - Wide{b.num_} * a.den_, Wide{a.den_} * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return reduce(Wide{a.num_} * b.num_, Wide{a.den_} * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return reduce(Wide{a.num_} * b.den_, Wide{a.den_} * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  return Wide{a.num_} * b.den_ <=> Wide{b.num_} * a.den_;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.to_string(); }

bool signed_difference_exceeds(int sign, const Rational& a, const Rational& b, const Rational& threshold) noexcept {
  // sign * (an*bd - bn*ad) / (ad*bd) > tn / td, all denominators positive.
  const Wide diff = Wide{a.numerator()} * b.denominator() - Wide{b.numerator()} * a.denominator();
  const Wide lhs = (sign < 0 ? -diff : diff) * threshold.denominator();
  const Wide rhs = Wide{threshold.numerator()} * a.denominator() * b.denominator();
  return lhs > rhs;
}

}  // namespace htisim
