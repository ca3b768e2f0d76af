#pragma once

#include <array>
#include <chrono>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cloudcraft/clock.hpp"
#include "cloudcraft/costmodel.hpp"
#include "cloudcraft/domain.hpp"
#include "cloudcraft/store.hpp"

namespace cloudcraft::billing {

// Measured outcome of one print job, as reported by the agent. Costs are
// settled from these, not from the static profile.
struct JobMetrics {
  Mass filament_used;
  std::array<std::chrono::milliseconds, 3> phase_durations{};
  std::array<Energy, 3> phase_energies{};
};

struct StakeholderIds {
  std::string platform;
  std::string printer_operator;
  std::string webshop_operator;
  std::string designer;

  std::string id_of(cost::Stakeholder s) const;
};

struct Transaction {
  std::string txn_id;
  std::string order_id;
  Money revenue;
  cost::CostBreakdown breakdown;
  cost::ProfitAllocation allocation;
  StakeholderIds stakeholders;
  std::string printer_id;
  int64_t settled_at_ms = 0;
};

struct LedgerEntry {
  std::string entry_id;
  cost::Stakeholder role = cost::Stakeholder::Platform;
  std::string stakeholder_id;
  Money amount;
  std::string txn_id;
};

enum class CodeState { Active, Redeemed, Expired };

struct RedeemCode {
  std::string code;
  // Exactly one of the two applies.
  std::optional<int32_t> percent_ppm;  // (0, 1'000'000]
  std::optional<Money> fixed;
  CodeState state = CodeState::Active;
  int64_t expires_at_ms = 0;
  std::string redeemed_order_id;
};

class InvalidState : public std::runtime_error {
 public:
  explicit InvalidState(const std::string& why) : std::runtime_error(why) {}
};

class BadDiscount : public std::invalid_argument {
 public:
  BadDiscount() : std::invalid_argument("discount must be a percentage in (0,1] or fixed >= 0") {}
};

class UnknownCode : public std::runtime_error {
 public:
  explicit UnknownCode(const std::string& code) : std::runtime_error("unknown code: " + code) {}
};

class AlreadyRedeemed : public std::runtime_error {
 public:
  AlreadyRedeemed() : std::runtime_error("code already redeemed") {}
};

class CodeExpired : public std::runtime_error {
 public:
  CodeExpired() : std::runtime_error("code expired") {}
};

struct SettleResult {
  Transaction txn;
  bool created = false;  // false: order was already settled
};

class BillingService {
 public:
  BillingService(Store& store, Clock& clock, cost::FixedCosts fixed, cost::EnergyTariff tariff,
                 cost::ShareWeights weights);

  // Idempotent per order: concurrent callers agree on one transaction and
  // one set of ledger entries. The order must be Completed.
  SettleResult settle_order(const Order& order, const JobMetrics& metrics,
                            const FilamentSpec& spool, const std::string& printer_id,
                            const StakeholderIds& stakeholders);

  RedeemCode create_redeem_code(std::optional<double> percent, std::optional<Money> fixed,
                                int64_t expires_at_ms);
  // Marks the code redeemed atomically and applies the discount to the
  // order record. Returns the discounted price.
  Money redeem(const std::string& code, const std::string& order_id);

  Money ledger_balance(const std::string& stakeholder_id) const;
  std::vector<LedgerEntry> ledger_entries(const std::string& stakeholder_filter = {}) const;
  std::vector<Transaction> transactions() const;
  std::optional<Transaction> find_transaction(const std::string& order_id) const;
  void export_ledger_csv(std::ostream& out) const;

  const cost::FixedCosts& fixed_costs() const { return fixed_; }
  const cost::EnergyTariff& tariff() const { return tariff_; }
  const cost::ShareWeights& weights() const { return weights_; }

 private:
  std::optional<RedeemCode> load_code(const std::string& code, uint64_t* version) const;

  Store& store_;
  Clock& clock_;
  cost::FixedCosts fixed_;
  cost::EnergyTariff tariff_;
  cost::ShareWeights weights_;
};

}  // namespace cloudcraft::billing
