#include <doctest.h>

#include <array>
#include <random>

#include "cloudcraft/costmodel.hpp"
#include "test_util.hpp"

using namespace cloudcraft;
using namespace cloudcraft::cost;

namespace {

const EnergyTariff kTariff{Money::parse("0.30")};

// Independent oracle for the rational products the cost model computes:
// plain 128-bit integer arithmetic, rounded half away from zero, written
// without reference to Money::mul_div.
int64_t oracle_ratio(int64_t amount_micros, int64_t num, int64_t den) {
  __int128 p = static_cast<__int128>(amount_micros) * num;
  bool negative = p < 0;
  __int128 ap = negative ? -p : p;
  __int128 q = ap / den;
  if ((ap % den) * 2 >= den) q += 1;
  return static_cast<int64_t>(negative ? -q : q);
}

int64_t oracle_material_micros(int64_t unit_mg, int64_t spool_mg, int64_t price_micros) {
  return oracle_ratio(price_micros, unit_mg, spool_mg);
}

int64_t oracle_energy_micros(int64_t total_mwh, int64_t tariff_micros) {
  return oracle_ratio(tariff_micros, total_mwh, 1'000'000);
}

}  // namespace

TEST_CASE("material cost per unit, paper-compat and exact") {
  auto p1 = testutil::ultimaker2plus();
  auto p2 = testutil::k1max();
  auto p3 = testutil::mk4();

  CHECK(material_cost(p1.unit_filament_mass, p1.filament, RoundingMode::PaperCompat) ==
        Money::parse("0.17"));
  CHECK(material_cost(p2.unit_filament_mass, p2.filament, RoundingMode::PaperCompat) ==
        Money::parse("0.07"));
  CHECK(material_cost(p3.unit_filament_mass, p3.filament, RoundingMode::PaperCompat) ==
        Money::parse("0.09"));

  // 2.85/1000 * 29.99 = 0.0854715, half away from zero at micro precision.
  CHECK(oracle_material_micros(2'850, 1'000'000, 29'990'000) == 85'472);
  CHECK(material_cost(p3.unit_filament_mass, p3.filament, RoundingMode::Exact) ==
        Money::from_micros(85'472));

  FilamentSpec bad{Mass::from_mg(0), Money::parse("1.00"), "PLA"};
  CHECK_THROWS_AS(material_cost(Mass::from_mg(1), bad, RoundingMode::Exact), ZeroSpoolMass);
}

TEST_CASE("energy cost from metered phase energies") {
  // Oracle first: 90.73 Wh at 0.30 EUR/kWh.
  CHECK(oracle_energy_micros(90'730, 300'000) == 27'219);
  CHECK(oracle_energy_micros(36'340, 300'000) == 10'902);
  CHECK(oracle_energy_micros(51'040, 300'000) == 15'312);

  std::array<Energy, 3> p1 = {Energy::from_mwh(12'280), Energy::from_mwh(77'930),
                              Energy::from_mwh(520)};
  CHECK(energy_cost_from_energies(p1, kTariff) == Money::from_micros(27'219));

  std::array<Energy, 3> zero = {Energy{}, Energy{}, Energy{}};
  CHECK(energy_cost_from_energies(zero, kTariff) == Money{});

  std::array<Energy, 3> p2 = {Energy::from_mwh(14'180), Energy::from_mwh(22'060),
                              Energy::from_mwh(100)};
  CHECK(energy_cost_from_energies(p2, kTariff) == Money::from_micros(10'902));
}

TEST_CASE("energy cost from durations and average powers") {
  // 1 kWh at tariff.
  std::array<PhasePower, 1> one_kwh = {PhasePower{std::chrono::milliseconds(3'600'000), 1000.0}};
  CHECK(energy_cost_from_durations(one_kwh, kTariff) == Money::parse("0.30"));

  // Table-derived powers for printer 3 reproduce the metered cost.
  auto p3 = testutil::mk4();
  std::array<PhasePower, 3> phases;
  for (size_t i = 0; i < 3; ++i)
    phases[i] = PhasePower{p3.phases[i].duration, p3.phases[i].avg_power_w()};
  CHECK(energy_cost_from_durations(phases, kTariff) == Money::from_micros(15'312));
}

TEST_CASE("duration route equals metered route for random profiles") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int64_t> dur_ms(1, 10'000'000);
  std::uniform_int_distribution<int64_t> mwh(0, 1'000'000);
  for (int trial = 0; trial < 2'000; ++trial) {
    std::array<Energy, 3> energies;
    std::array<PhasePower, 3> powers;
    for (size_t i = 0; i < 3; ++i) {
      auto d = std::chrono::milliseconds(dur_ms(rng));
      energies[i] = Energy::from_mwh(mwh(rng));
      PhaseMetrics m{Phase::PrePrint, d, energies[i]};
      powers[i] = PhasePower{d, m.avg_power_w()};
    }
    CHECK(energy_cost_from_durations(powers, kTariff) ==
          energy_cost_from_energies(energies, kTariff));
  }
}

TEST_CASE("production cost reproduces the published totals") {
  CHECK(production_cost(testutil::ultimaker2plus(), kTariff, RoundingMode::PaperCompat) ==
        Money::parse("0.197"));
  CHECK(production_cost(testutil::k1max(), kTariff, RoundingMode::PaperCompat) ==
        Money::parse("0.081"));
  CHECK(production_cost(testutil::mk4(), kTariff, RoundingMode::PaperCompat) ==
        Money::parse("0.105"));

  // Exact mode differs only by the documented rounding gap.
  CHECK(production_cost(testutil::k1max(), kTariff, RoundingMode::Exact) ==
        Money::from_micros(65'602 + 10'902));
  CHECK(production_cost(testutil::mk4(), kTariff, RoundingMode::Exact) ==
        Money::from_micros(100'784));
}

TEST_CASE("fixed cost amortization") {
  CHECK(amortized_fixed_cost(Money::parse("29.00"), 100) == Money::parse("0.29"));
  CHECK(amortized_fixed_cost(Money::parse("175.00"), 100) == Money::parse("1.75"));
  CHECK(amortized_fixed_cost(Money::parse("175.00"), 1) == Money::parse("175.00"));
  CHECK(amortized_fixed_cost(Money::parse("175.00"), 1000) == Money::parse("0.175"));
  CHECK_THROWS_AS(amortized_fixed_cost(Money::parse("175.00"), 0), ZeroVolume);
}

TEST_CASE("total cost breakdown matches the published grand totals") {
  FixedCosts fixed;
  auto check = [&](const PrinterProfile& p, const char* total) {
    CostBreakdown b = total_cost(p, kTariff, fixed, RoundingMode::PaperCompat);
    CHECK(b.total == Money::parse(total));
    CHECK(b.webshop == Money::parse("0.29"));
    CHECK(b.cloud == Money::parse("1.75"));
    CHECK(b.total == b.webshop + b.cloud + b.production);
  };
  check(testutil::ultimaker2plus(), "2.237");
  check(testutil::k1max(), "2.121");
  check(testutil::mk4(), "2.145");
}

TEST_CASE("breakdown internal consistency per mode") {
  FixedCosts fixed;
  for (const auto& profile :
       {testutil::ultimaker2plus(), testutil::k1max(), testutil::mk4()}) {
    CostBreakdown exact = total_cost(profile, kTariff, fixed, RoundingMode::Exact);
    CHECK(exact.production == exact.material + exact.energy);

    CostBreakdown paper = total_cost(profile, kTariff, fixed, RoundingMode::PaperCompat);
    // Production only re-rounds to a tenth of a cent after summing.
    auto gap = paper.production - (paper.material + paper.energy);
    CHECK(gap.micros() <= 500);
    CHECK(gap.micros() >= -500);
  }
}

TEST_CASE("transaction fee is off by default and adds price share when on") {
  FixedCosts fixed;
  auto base = total_cost(testutil::k1max(), kTariff, fixed, RoundingMode::PaperCompat,
                         Money::parse("10.00"));
  CHECK(base.total == Money::parse("2.121"));

  fixed.transaction_fee_enabled = true;
  auto with_fee = total_cost(testutil::k1max(), kTariff, fixed, RoundingMode::PaperCompat,
                             Money::parse("10.00"));
  CHECK(with_fee.webshop == Money::parse("0.29") + Money::parse("0.20"));
  CHECK(with_fee.total == Money::parse("2.321"));
}

TEST_CASE("total cost is monotone in its inputs") {
  FixedCosts fixed;
  auto base = total_cost(testutil::k1max(), kTariff, fixed, RoundingMode::Exact).total;

  auto pricier = testutil::k1max();
  pricier.filament.spool_price = pricier.filament.spool_price + Money::parse("5.00");
  CHECK(total_cost(pricier, kTariff, fixed, RoundingMode::Exact).total >= base);

  auto hungrier = testutil::k1max();
  hungrier.phases[1].energy += Energy::from_mwh(10'000);
  CHECK(total_cost(hungrier, kTariff, fixed, RoundingMode::Exact).total >= base);

  EnergyTariff dearer{Money::parse("0.45")};
  CHECK(total_cost(testutil::k1max(), dearer, fixed, RoundingMode::Exact).total >= base);

  FixedCosts heavier;
  heavier.cloud_monthly = Money::parse("200.00");
  CHECK(total_cost(testutil::k1max(), kTariff, heavier, RoundingMode::Exact).total >= base);
}

TEST_CASE("monthly tco and profit") {
  CHECK(monthly_tco(Money::parse("2.121"), 100) == Money::parse("212.10"));
  CHECK(monthly_tco(Money::parse("2.237"), 100) == Money::parse("223.70"));
  CHECK_THROWS_AS(monthly_tco(Money::parse("2.237"), 0), ZeroVolume);

  CHECK(monthly_profit(Money::parse("10.00"), 100, Money::parse("223.70")) ==
        Money::parse("776.30"));
  CHECK(monthly_profit(Money::parse("10.00"), 100, Money::parse("212.10")) ==
        Money::parse("787.90"));
  CHECK(monthly_profit(Money::parse("10.00"), 100, Money::parse("1000.00")) ==
        Money::parse("0.00"));
  CHECK(monthly_profit(Money::parse("5.00"), 10, Money::parse("100.00")) ==
        Money::parse("-50.00"));
}
