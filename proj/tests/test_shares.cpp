#include <doctest.h>

#include <random>

#include "cloudcraft/costmodel.hpp"

using namespace cloudcraft;
using namespace cloudcraft::cost;

TEST_CASE("published monthly share tables") {
  ShareWeights weights;

  auto upper = allocate_shares(Money::parse("787.90"), weights);
  CHECK(upper.shares[Stakeholder::Platform] == Money::parse("315.16"));
  CHECK(upper.shares[Stakeholder::PrinterOperator] == Money::parse("236.37"));
  CHECK(upper.shares[Stakeholder::WebshopOperator] == Money::parse("157.58"));
  CHECK(upper.shares[Stakeholder::Designer] == Money::parse("78.79"));

  auto lower = allocate_shares(Money::parse("776.30"), weights);
  CHECK(lower.shares[Stakeholder::Platform] == Money::parse("310.52"));
  CHECK(lower.shares[Stakeholder::PrinterOperator] == Money::parse("232.89"));
  CHECK(lower.shares[Stakeholder::WebshopOperator] == Money::parse("155.26"));
  CHECK(lower.shares[Stakeholder::Designer] == Money::parse("77.63"));

  auto zero = allocate_shares(Money{}, weights);
  for (Stakeholder s : kAllStakeholders) CHECK(zero.shares[s] == Money{});
}

TEST_CASE("per-order allocation keeps exact quotas") {
  // 10 - 2.121 = 7.879; each quota divides exactly at micro precision,
  // so one hundred identical orders aggregate to the monthly table.
  auto a = allocate_shares(Money::parse("7.879"), ShareWeights{});
  CHECK(a.shares[Stakeholder::Platform] == Money::from_micros(3'151'600));
  CHECK(a.shares[Stakeholder::Platform].str(2) == "3.15");
  CHECK(a.shares[Stakeholder::PrinterOperator] == Money::from_micros(2'363'700));
  CHECK(a.shares[Stakeholder::WebshopOperator] == Money::from_micros(1'575'800));
  CHECK(a.shares[Stakeholder::Designer] == Money::from_micros(787'900));

  Money sum;
  for (Stakeholder s : kAllStakeholders) sum += a.shares[s];
  CHECK(sum == Money::parse("7.879"));
}

TEST_CASE("weights must sum to one") {
  ShareWeights bad;
  bad.designer_ppm = 100'001;
  CHECK_THROWS_AS(allocate_shares(Money::parse("1.00"), bad), BadWeights);
  bad = ShareWeights{};
  bad.platform_ppm = -1;
  bad.printer_operator_ppm = 700'001;
  CHECK_THROWS_AS(allocate_shares(Money::parse("1.00"), bad), BadWeights);
}

TEST_CASE("shares sum to profit exactly for random profits") {
  ShareWeights weights;
  std::mt19937_64 rng(20260811);
  std::uniform_int_distribution<int64_t> micros(-500'000'000'000, 500'000'000'000);
  for (int i = 0; i < 10'000; ++i) {
    Money profit = Money::from_micros(micros(rng));
    auto a = allocate_shares(profit, weights);
    Money sum;
    for (Stakeholder s : kAllStakeholders) {
      sum += a.shares[s];
      // Each share within half a cent of its exact quota.
      int64_t quota = static_cast<int64_t>(
          (static_cast<__int128>(profit.micros()) * weights.ppm(s)) / 1'000'000);
      int64_t diff = a.shares[s].micros() - quota;
      CHECK(diff >= -5'000);
      CHECK(diff <= 5'000);
    }
    CHECK(sum == profit);
  }
}

TEST_CASE("losses are shared with the same weights") {
  auto a = allocate_shares(Money::parse("-100.00"), ShareWeights{});
  CHECK(a.shares[Stakeholder::Platform] == Money::parse("-40.00"));
  CHECK(a.shares[Stakeholder::Designer] == Money::parse("-10.00"));
  Money sum;
  for (Stakeholder s : kAllStakeholders) sum += a.shares[s];
  CHECK(sum == Money::parse("-100.00"));
}

TEST_CASE("leftover micro-euros go to the largest remainders in role order") {
  // 11 micro-euros: quotas 4.4 / 3.3 / 2.2 / 1.1 -> floors 4/3/2/1,
  // leftover 1 goes to the largest remainder; remainders tie at 0.4,
  // 0.3, 0.2, 0.1 scaled -- platform leads.
  auto a = allocate_shares(Money::from_micros(11), ShareWeights{});
  CHECK(a.shares[Stakeholder::Platform] == Money::from_micros(5));
  CHECK(a.shares[Stakeholder::PrinterOperator] == Money::from_micros(3));
  CHECK(a.shares[Stakeholder::WebshopOperator] == Money::from_micros(2));
  CHECK(a.shares[Stakeholder::Designer] == Money::from_micros(1));
}
