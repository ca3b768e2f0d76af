#include <doctest.h>

#include <random>

#include "cloudcraft/money.hpp"

using cloudcraft::Money;

TEST_CASE("parse and format decimal euro amounts") {
  CHECK(Money::parse("42.99").micros() == 42'990'000);
  CHECK(Money::parse("0.30").micros() == 300'000);
  CHECK(Money::parse("10").micros() == 10'000'000);
  CHECK(Money::parse("-0.005").micros() == -5'000);
  CHECK(Money::parse("0.085472").micros() == 85'472);

  CHECK(Money::parse("2.121").str() == "2.121");
  CHECK(Money::parse("0.29").str() == "0.29");
  CHECK(Money::from_micros(85'472).str() == "0.085472");
  CHECK(Money::from_micros(0).str() == "0.00");
  CHECK(Money::parse("776.30").str(2) == "776.30");

  CHECK_THROWS_AS(Money::parse(""), cloudcraft::MoneyParseError);
  CHECK_THROWS_AS(Money::parse("1.2345678"), cloudcraft::MoneyParseError);
  CHECK_THROWS_AS(Money::parse("1,50"), cloudcraft::MoneyParseError);
}

TEST_CASE("rounding is half away from zero") {
  CHECK(Money::from_micros(166'228).round_to_cents().micros() == 170'000);
  CHECK(Money::from_micros(65'602).round_to_cents().micros() == 70'000);
  CHECK(Money::from_micros(85'471).round_to_cents().micros() == 90'000);
  CHECK(Money::from_micros(165'000).round_to_cents().micros() == 170'000);  // exact half up
  CHECK(Money::from_micros(-165'000).round_to_cents().micros() == -170'000);
  CHECK(Money::from_micros(164'999).round_to_cents().micros() == 160'000);

  CHECK(Money::from_micros(197'219).round_to_tenth_cent().micros() == 197'000);
  CHECK(Money::from_micros(80'902).round_to_tenth_cent().micros() == 81'000);
  CHECK(Money::from_micros(105'312).round_to_tenth_cent().micros() == 105'000);
  CHECK(Money::from_micros(105'500).round_to_tenth_cent().micros() == 106'000);
}

TEST_CASE("mul_div keeps exact rationals at micro-euro precision") {
  // 2.85 g on a 1000 g / 29.99 EUR spool: 85471.5 micro-euros exactly.
  CHECK(Money::parse("29.99").mul_div(2'850, 1'000'000).micros() == 85'472);
  // 2.9 g on a 750 g / 42.99 EUR spool.
  CHECK(Money::parse("42.99").mul_div(2'900, 750'000).micros() == 166'228);
  CHECK(Money::parse("-29.99").mul_div(2'850, 1'000'000).micros() == -85'472);
}

TEST_CASE("arithmetic is exact over random amounts") {
  std::mt19937_64 rng(20260811);
  std::uniform_int_distribution<int64_t> dist(-1'000'000'000'000, 1'000'000'000'000);
  for (int i = 0; i < 10'000; ++i) {
    Money a = Money::from_micros(dist(rng));
    Money b = Money::from_micros(dist(rng));
    CHECK(((a + b) - b) == a);
  }
}

TEST_CASE("overflow is detected") {
  Money big = Money::from_micros(INT64_MAX);
  CHECK_THROWS_AS(big + Money::from_micros(1), cloudcraft::MoneyOverflow);
  CHECK_THROWS_AS(big.times(2), cloudcraft::MoneyOverflow);
}
