#include "cloudcraft/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cloudcraft::cost {

RoundingMode rounding_mode_from_name(const std::string& name) {
  if (name == "paper" || name == "paper_compat") return RoundingMode::PaperCompat;
  if (name == "exact") return RoundingMode::Exact;
  throw std::invalid_argument("unknown rounding mode: " + name);
}

const char* rounding_mode_name(RoundingMode mode) {
  return mode == RoundingMode::PaperCompat ? "paper" : "exact";
}

const char* stakeholder_name(Stakeholder s) {
  switch (s) {
    case Stakeholder::Platform: return "platform";
    case Stakeholder::PrinterOperator: return "printer_operator";
    case Stakeholder::WebshopOperator: return "webshop_operator";
    case Stakeholder::Designer: return "designer";
  }
  return "?";
}

Stakeholder stakeholder_from_name(const std::string& name) {
  for (Stakeholder s : kAllStakeholders)
    if (name == stakeholder_name(s)) return s;
  throw std::invalid_argument("unknown stakeholder: " + name);
}

int32_t ShareWeights::ppm(Stakeholder s) const {
  switch (s) {
    case Stakeholder::Platform: return platform_ppm;
    case Stakeholder::PrinterOperator: return printer_operator_ppm;
    case Stakeholder::WebshopOperator: return webshop_operator_ppm;
    case Stakeholder::Designer: return designer_ppm;
  }
  return 0;
}

void ShareWeights::validate() const {
  int64_t sum = 0;
  for (Stakeholder s : kAllStakeholders) {
    if (ppm(s) < 0) throw BadWeights();
    sum += ppm(s);
  }
  if (sum != 1'000'000) throw BadWeights();
}

Money material_cost(Mass unit_mass, const FilamentSpec& spool, RoundingMode mode) {
  if (spool.spool_mass.milligrams <= 0) throw ZeroSpoolMass();
  Money exact = spool.spool_price.mul_div(unit_mass.milligrams, spool.spool_mass.milligrams);
  return mode == RoundingMode::PaperCompat ? exact.round_to_cents() : exact;
}

namespace {

Money energy_cost_mwh(int64_t total_mwh, const EnergyTariff& tariff) {
  // mWh -> kWh is a factor of 1e6.
  return tariff.rate_per_kwh.mul_div(total_mwh, 1'000'000);
}

}  // namespace

Money energy_cost_from_energies(std::span<const Energy> phase_energies,
                                const EnergyTariff& tariff) {
  tariff.validate();
  int64_t total_mwh = 0;
  for (const Energy& e : phase_energies) {
    if (e.milliwatt_hours < 0) throw std::invalid_argument("phase energy negative");
    total_mwh += e.milliwatt_hours;
  }
  return energy_cost_mwh(total_mwh, tariff);
}

Money energy_cost_from_durations(std::span<const PhasePower> phases, const EnergyTariff& tariff) {
  tariff.validate();
  int64_t total_mwh = 0;
  for (const PhasePower& p : phases) {
    if (p.duration.count() < 0 || p.avg_power_w < 0)
      throw std::invalid_argument("duration and power must be >= 0");
    // W * ms / 3600 = mWh; quantized per phase so that powers derived
    // from PhaseMetrics reproduce the stored energies exactly.
    total_mwh += std::llround(p.avg_power_w * static_cast<double>(p.duration.count()) / 3600.0);
  }
  return energy_cost_mwh(total_mwh, tariff);
}

Money production_cost(const PrinterProfile& profile, const EnergyTariff& tariff,
                      RoundingMode mode) {
  profile.validate();
  std::array<Energy, 3> energies{profile.phases[0].energy, profile.phases[1].energy,
                                 profile.phases[2].energy};
  Money material = material_cost(profile.unit_filament_mass, profile.filament, mode);
  Money energy = energy_cost_from_energies(energies, tariff);
  Money production = material + energy;
  return mode == RoundingMode::PaperCompat ? production.round_to_tenth_cent() : production;
}

Money amortized_fixed_cost(Money monthly, int64_t volume) {
  if (volume < 1) throw ZeroVolume();
  return monthly.mul_div(1, volume);
}

CostBreakdown breakdown_from_metrics(Mass filament_used, const FilamentSpec& spool,
                                     std::span<const Energy> phase_energies,
                                     const EnergyTariff& tariff, const FixedCosts& fixed,
                                     RoundingMode mode, std::optional<Money> sale_price) {
  fixed.validate();
  CostBreakdown b;
  b.rounding_mode = mode;
  b.material = material_cost(filament_used, spool, mode);
  b.energy = energy_cost_from_energies(phase_energies, tariff);
  b.production = b.material + b.energy;
  if (mode == RoundingMode::PaperCompat) b.production = b.production.round_to_tenth_cent();
  b.webshop = amortized_fixed_cost(fixed.webshop_monthly, fixed.monthly_volume);
  if (fixed.transaction_fee_enabled && sale_price)
    b.webshop += sale_price->mul_div(fixed.transaction_fee_ppm, 1'000'000);
  b.cloud = amortized_fixed_cost(fixed.cloud_monthly, fixed.monthly_volume);
  b.total = b.webshop + b.cloud + b.production;
  return b;
}

CostBreakdown total_cost(const PrinterProfile& profile, const EnergyTariff& tariff,
                         const FixedCosts& fixed, RoundingMode mode,
                         std::optional<Money> sale_price) {
  profile.validate();
  std::array<Energy, 3> energies{profile.phases[0].energy, profile.phases[1].energy,
                                 profile.phases[2].energy};
  return breakdown_from_metrics(profile.unit_filament_mass, profile.filament, energies, tariff,
                                fixed, mode, sale_price);
}

Money monthly_tco(Money unit_total, int64_t volume) {
  if (volume < 1) throw ZeroVolume();
  return unit_total.times(volume);
}

Money monthly_profit(Money unit_price, int64_t volume, Money tco) {
  return unit_price.times(volume) - tco;
}

ProfitAllocation allocate_shares(Money profit, const ShareWeights& weights) {
  weights.validate();

  const bool negative = profit.is_negative();
  const int64_t magnitude = negative ? -profit.micros() : profit.micros();

  struct Slot {
    Stakeholder who;
    int64_t base;
    int64_t remainder;  // of profit * ppm mod 1e6
  };
  std::array<Slot, 4> slots;
  int64_t assigned = 0;
  for (size_t i = 0; i < kAllStakeholders.size(); ++i) {
    const Stakeholder who = kAllStakeholders[i];
    const __int128 quota = static_cast<__int128>(magnitude) * weights.ppm(who);
    slots[i] = Slot{who, static_cast<int64_t>(quota / 1'000'000),
                    static_cast<int64_t>(quota % 1'000'000)};
    assigned += slots[i].base;
  }

  // Weights sum to 1e6, so the leftover is a whole number of micro-euros.
  int64_t leftover = magnitude - assigned;
  std::array<size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return slots[a].remainder > slots[b].remainder;
  });
  for (size_t i = 0; leftover > 0; ++i, --leftover) slots[order[i % 4]].base += 1;

  ProfitAllocation out;
  out.profit = profit;
  for (const Slot& s : slots)
    out.shares[s.who] = Money::from_micros(negative ? -s.base : s.base);
  return out;
}

}  // namespace cloudcraft::cost
