#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cloudcraft {

class MoneyOverflow : public std::overflow_error {
 public:
  MoneyOverflow() : std::overflow_error("money arithmetic overflow") {}
};

class MoneyParseError : public std::invalid_argument {
 public:
  explicit MoneyParseError(const std::string& text)
      : std::invalid_argument("not a money amount: '" + text + "'") {}
};

// Euro amount held as integer micro-euros (1 EUR == 1'000'000 units).
// Arithmetic is exact. Converting to coarser units (cents, tenths of a
// cent) rounds half away from zero and is always an explicit call.
class Money {
 public:
  static constexpr int64_t kMicrosPerEuro = 1'000'000;
  static constexpr int64_t kMicrosPerCent = 10'000;
  static constexpr int64_t kMicrosPerTenthCent = 1'000;

  constexpr Money() = default;

  static constexpr Money from_micros(int64_t micros) { return Money(micros); }
  static Money from_cents(int64_t cents);
  static Money from_euros(int64_t euros);
  // Nearest micro-euro; exact for any value with <= 6 decimals.
  static Money from_euros_approx(double euros);
  // Strict decimal parse, e.g. "42.99", "-0.005", "10". Max 6 decimals.
  static Money parse(std::string_view text);

  constexpr int64_t micros() const { return micros_; }
  int64_t whole_cents() const;  // rounds half away from zero
  double euros() const { return static_cast<double>(micros_) / kMicrosPerEuro; }

  Money round_to_cents() const { return round_to(kMicrosPerCent); }
  Money round_to_tenth_cent() const { return round_to(kMicrosPerTenthCent); }
  Money round_to(int64_t unit) const;

  // (*this * num) / den with a 128-bit intermediate, rounded half away
  // from zero. den must be nonzero.
  Money mul_div(int64_t num, int64_t den) const;
  Money times(int64_t n) const;

  bool is_negative() const { return micros_ < 0; }
  bool is_zero() const { return micros_ == 0; }

  // Decimal string without currency sign: "2.121", "0.29", "-0.005".
  // Trailing zeros trimmed, at least two decimals kept.
  std::string str() const;
  // Fixed number of decimals (0..6), rounding half away from zero.
  std::string str(int decimals) const;

  friend Money operator+(Money a, Money b);
  friend Money operator-(Money a, Money b);
  Money operator-() const;
  Money& operator+=(Money other) { return *this = *this + other; }
  Money& operator-=(Money other) { return *this = *this - other; }

  friend constexpr bool operator==(Money a, Money b) { return a.micros_ == b.micros_; }
  friend constexpr bool operator!=(Money a, Money b) { return a.micros_ != b.micros_; }
  friend constexpr bool operator<(Money a, Money b) { return a.micros_ < b.micros_; }
  friend constexpr bool operator<=(Money a, Money b) { return a.micros_ <= b.micros_; }
  friend constexpr bool operator>(Money a, Money b) { return a.micros_ > b.micros_; }
  friend constexpr bool operator>=(Money a, Money b) { return a.micros_ >= b.micros_; }

 private:
  explicit constexpr Money(int64_t micros) : micros_(micros) {}
  int64_t micros_ = 0;
};

// q = num / den rounded half away from zero. den != 0.
int64_t div_round_half_away(__int128 num, int64_t den);

}  // namespace cloudcraft
