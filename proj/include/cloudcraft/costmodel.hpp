#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "cloudcraft/domain.hpp"
#include "cloudcraft/money.hpp"
#include "cloudcraft/units.hpp"

namespace cloudcraft::cost {

// PaperCompat reproduces the published figures: material rounded to whole
// cents before summation, the production total rounded to tenths of a
// cent. Exact keeps micro-euro precision throughout.
enum class RoundingMode { PaperCompat, Exact };

RoundingMode rounding_mode_from_name(const std::string& name);
const char* rounding_mode_name(RoundingMode mode);

struct EnergyTariff {
  Money rate_per_kwh;  // e.g. 0.30 EUR/kWh

  void validate() const {
    if (rate_per_kwh.is_negative()) throw std::invalid_argument("tariff must be >= 0");
  }
};

struct FixedCosts {
  Money webshop_monthly = Money::parse("29.00");
  Money cloud_monthly = Money::parse("175.00");
  int64_t monthly_volume = 100;
  int32_t transaction_fee_ppm = 20'000;  // 2%
  bool transaction_fee_enabled = false;

  void validate() const {
    if (monthly_volume < 1) throw std::invalid_argument("monthly volume must be >= 1");
    if (transaction_fee_ppm < 0 || transaction_fee_ppm >= 1'000'000)
      throw std::invalid_argument("transaction fee must be in [0,1)");
  }
};

struct CostBreakdown {
  Money material;
  Money energy;
  Money production;
  Money webshop;
  Money cloud;
  Money total;
  RoundingMode rounding_mode = RoundingMode::PaperCompat;
};

enum class Stakeholder { Platform, PrinterOperator, WebshopOperator, Designer };

inline constexpr std::array<Stakeholder, 4> kAllStakeholders = {
    Stakeholder::Platform, Stakeholder::PrinterOperator, Stakeholder::WebshopOperator,
    Stakeholder::Designer};

const char* stakeholder_name(Stakeholder s);
Stakeholder stakeholder_from_name(const std::string& name);

class BadWeights : public std::invalid_argument {
 public:
  BadWeights() : std::invalid_argument("share weights must sum to 1") {}
};

class ZeroSpoolMass : public std::invalid_argument {
 public:
  ZeroSpoolMass() : std::invalid_argument("spool mass must be positive") {}
};

class ZeroVolume : public std::invalid_argument {
 public:
  ZeroVolume() : std::invalid_argument("volume must be >= 1") {}
};

// Profit split weights in parts per million; must sum to exactly one.
struct ShareWeights {
  int32_t platform_ppm = 400'000;
  int32_t printer_operator_ppm = 300'000;
  int32_t webshop_operator_ppm = 200'000;
  int32_t designer_ppm = 100'000;

  int32_t ppm(Stakeholder s) const;
  void validate() const;
};

struct ProfitAllocation {
  Money revenue;
  Money tco;
  Money profit;
  std::map<Stakeholder, Money> shares;
};

// Prorated spool price for the filament one unit consumes.
Money material_cost(Mass unit_mass, const FilamentSpec& spool, RoundingMode mode);

// Metered route: kWh consumed across phases times the tariff.
Money energy_cost_from_energies(std::span<const Energy> phase_energies,
                                const EnergyTariff& tariff);

struct PhasePower {
  std::chrono::milliseconds duration{0};
  double avg_power_w = 0.0;
};

// Time-based route: per-phase duration times average power. Agrees with
// the metered route exactly when powers are derived from PhaseMetrics.
Money energy_cost_from_durations(std::span<const PhasePower> phases, const EnergyTariff& tariff);

Money production_cost(const PrinterProfile& profile, const EnergyTariff& tariff,
                      RoundingMode mode);

// Monthly fixed cost divided over the monthly volume, exact to the
// micro-euro (whole-cent figures like 29/100 stay whole cents).
Money amortized_fixed_cost(Money monthly, int64_t volume);

// Full per-unit breakdown: webshop + cloud amortization on top of
// production. sale_price only matters when the transaction fee is on.
CostBreakdown total_cost(const PrinterProfile& profile, const EnergyTariff& tariff,
                         const FixedCosts& fixed, RoundingMode mode,
                         std::optional<Money> sale_price = std::nullopt);

// Same breakdown from measured job metrics instead of the static profile.
CostBreakdown breakdown_from_metrics(Mass filament_used, const FilamentSpec& spool,
                                     std::span<const Energy> phase_energies,
                                     const EnergyTariff& tariff, const FixedCosts& fixed,
                                     RoundingMode mode,
                                     std::optional<Money> sale_price = std::nullopt);

Money monthly_tco(Money unit_total, int64_t volume);

Money monthly_profit(Money unit_price, int64_t volume, Money tco);

// Largest-remainder split at micro-euro granularity: exact quotas are
// floored and leftover micro-euros go to the largest fractional
// remainders (ties by role order: platform, printer op, webshop op,
// designer). Shares always sum to profit exactly; losses split the same
// way.
ProfitAllocation allocate_shares(Money profit, const ShareWeights& weights);

}  // namespace cloudcraft::cost
