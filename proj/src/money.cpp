#include "cloudcraft/money.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cloudcraft {

namespace {

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw MoneyOverflow();
  return out;
}

}  // namespace

int64_t div_round_half_away(__int128 num, int64_t den) {
  if (den == 0) throw std::domain_error("division by zero");
  __int128 d = den;
  __int128 q = num / d;
  __int128 r = num % d;
  __int128 abs_r = r < 0 ? -r : r;
  __int128 abs_d = d < 0 ? -d : d;
  if (abs_r * 2 >= abs_d) {
    bool positive = (num < 0) == (d < 0);
    q += positive ? 1 : -1;
  }
  constexpr __int128 lo = static_cast<__int128>(INT64_MIN);
  constexpr __int128 hi = static_cast<__int128>(INT64_MAX);
  if (q < lo || q > hi) throw MoneyOverflow();
  return static_cast<int64_t>(q);
}

Money Money::from_cents(int64_t cents) {
  return Money(checked_mul(cents, kMicrosPerCent));
}

Money Money::from_euros(int64_t euros) {
  return Money(checked_mul(euros, kMicrosPerEuro));
}

Money Money::from_euros_approx(double euros) {
  double scaled = euros * static_cast<double>(kMicrosPerEuro);
  if (!(scaled >= static_cast<double>(INT64_MIN) && scaled <= static_cast<double>(INT64_MAX)))
    throw MoneyOverflow();
  return Money(static_cast<int64_t>(std::llround(scaled)));
}

Money Money::parse(std::string_view text) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw MoneyParseError(original);

  int64_t whole = 0;
  size_t i = 0;
  bool any_digit = false;
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw MoneyParseError(original);
    whole = checked_mul(whole, 10);
    if (__builtin_add_overflow(whole, text[i] - '0', &whole)) throw MoneyOverflow();
    any_digit = true;
  }
  int64_t frac = 0;
  int frac_digits = 0;
  if (i < text.size()) {
    ++i;  // skip '.'
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw MoneyParseError(original);
      if (++frac_digits > 6) throw MoneyParseError(original);
      frac = frac * 10 + (text[i] - '0');
      any_digit = true;
    }
  }
  if (!any_digit) throw MoneyParseError(original);
  for (int d = frac_digits; d < 6; ++d) frac *= 10;

  int64_t micros = checked_mul(whole, kMicrosPerEuro);
  if (__builtin_add_overflow(micros, frac, &micros)) throw MoneyOverflow();
  return Money(negative ? -micros : micros);
}

int64_t Money::whole_cents() const {
  return div_round_half_away(micros_, kMicrosPerCent);
}

Money Money::round_to(int64_t unit) const {
  if (unit <= 0) throw std::domain_error("rounding unit must be positive");
  return Money(checked_mul(div_round_half_away(micros_, unit), unit));
}

Money Money::mul_div(int64_t num, int64_t den) const {
  return Money(div_round_half_away(static_cast<__int128>(micros_) * num, den));
}

Money Money::times(int64_t n) const { return Money(checked_mul(micros_, n)); }

std::string Money::str() const {
  std::string out = str(6);
  while (out.size() > 0 && out.back() == '0') {
    // keep at least two decimals
    size_t dot = out.find('.');
    if (out.size() - dot - 1 <= 2) break;
    out.pop_back();
  }
  return out;
}

std::string Money::str(int decimals) const {
  if (decimals < 0 || decimals > 6) throw std::domain_error("decimals out of range");
  int64_t unit = kMicrosPerEuro;
  for (int d = 0; d < decimals; ++d) unit /= 10;
  int64_t scaled = div_round_half_away(micros_, unit);
  bool negative = scaled < 0;
  uint64_t abs_scaled = negative ? -static_cast<uint64_t>(scaled) : static_cast<uint64_t>(scaled);
  uint64_t pow = 1;
  for (int d = 0; d < decimals; ++d) pow *= 10;
  uint64_t whole = abs_scaled / pow;
  uint64_t frac = abs_scaled % pow;

  char buf[64];
  if (decimals == 0) {
    std::snprintf(buf, sizeof buf, "%s%llu", negative ? "-" : "",
                  static_cast<unsigned long long>(whole));
  } else {
    std::snprintf(buf, sizeof buf, "%s%llu.%0*llu", negative ? "-" : "",
                  static_cast<unsigned long long>(whole), decimals,
                  static_cast<unsigned long long>(frac));
  }
  return buf;
}

Money operator+(Money a, Money b) {
  int64_t out = 0;
  if (__builtin_add_overflow(a.micros_, b.micros_, &out)) throw MoneyOverflow();
  return Money(out);
}

Money operator-(Money a, Money b) {
  int64_t out = 0;
  if (__builtin_sub_overflow(a.micros_, b.micros_, &out)) throw MoneyOverflow();
  return Money(out);
}

Money Money::operator-() const {
  if (micros_ == INT64_MIN) throw MoneyOverflow();
  return Money(-micros_);
}

}  // namespace cloudcraft
