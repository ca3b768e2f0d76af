#include "cloudcraft/billing.hpp"

#include <cmath>

#include <json.hpp>

#include "cloudcraft/auth.hpp"
#include "cloudcraft/log.hpp"

namespace cloudcraft::billing {

using cost::Stakeholder;

std::string StakeholderIds::id_of(Stakeholder s) const {
  switch (s) {
    case Stakeholder::Platform: return platform;
    case Stakeholder::PrinterOperator: return printer_operator;
    case Stakeholder::WebshopOperator: return webshop_operator;
    case Stakeholder::Designer: return designer;
  }
  return {};
}

namespace {

nlohmann::json breakdown_to_json(const cost::CostBreakdown& b) {
  return {{"material", b.material.micros()},   {"energy", b.energy.micros()},
          {"production", b.production.micros()}, {"webshop", b.webshop.micros()},
          {"cloud", b.cloud.micros()},         {"total", b.total.micros()},
          {"rounding_mode", cost::rounding_mode_name(b.rounding_mode)}};
}

cost::CostBreakdown breakdown_from_json(const nlohmann::json& j) {
  cost::CostBreakdown b;
  b.material = Money::from_micros(j.at("material").get<int64_t>());
  b.energy = Money::from_micros(j.at("energy").get<int64_t>());
  b.production = Money::from_micros(j.at("production").get<int64_t>());
  b.webshop = Money::from_micros(j.at("webshop").get<int64_t>());
  b.cloud = Money::from_micros(j.at("cloud").get<int64_t>());
  b.total = Money::from_micros(j.at("total").get<int64_t>());
  b.rounding_mode = cost::rounding_mode_from_name(j.at("rounding_mode").get<std::string>());
  return b;
}

nlohmann::json txn_to_json(const Transaction& t) {
  nlohmann::json shares = nlohmann::json::object();
  for (const auto& [who, amount] : t.allocation.shares)
    shares[cost::stakeholder_name(who)] = amount.micros();
  return {{"txn_id", t.txn_id},
          {"order_id", t.order_id},
          {"revenue", t.revenue.micros()},
          {"breakdown", breakdown_to_json(t.breakdown)},
          {"profit", t.allocation.profit.micros()},
          {"shares", shares},
          {"stakeholders",
           {{"platform", t.stakeholders.platform},
            {"printer_operator", t.stakeholders.printer_operator},
            {"webshop_operator", t.stakeholders.webshop_operator},
            {"designer", t.stakeholders.designer}}},
          {"printer_id", t.printer_id},
          {"settled_at_ms", t.settled_at_ms}};
}

Transaction txn_from_json(const nlohmann::json& j) {
  Transaction t;
  t.txn_id = j.at("txn_id").get<std::string>();
  t.order_id = j.at("order_id").get<std::string>();
  t.revenue = Money::from_micros(j.at("revenue").get<int64_t>());
  t.breakdown = breakdown_from_json(j.at("breakdown"));
  t.allocation.profit = Money::from_micros(j.at("profit").get<int64_t>());
  t.allocation.revenue = t.revenue;
  t.allocation.tco = t.breakdown.total;
  for (const auto& [name, micros] : j.at("shares").items())
    t.allocation.shares[cost::stakeholder_from_name(name)] =
        Money::from_micros(micros.get<int64_t>());
  const auto& ids = j.at("stakeholders");
  t.stakeholders.platform = ids.at("platform").get<std::string>();
  t.stakeholders.printer_operator = ids.at("printer_operator").get<std::string>();
  t.stakeholders.webshop_operator = ids.at("webshop_operator").get<std::string>();
  t.stakeholders.designer = ids.at("designer").get<std::string>();
  t.printer_id = j.at("printer_id").get<std::string>();
  t.settled_at_ms = j.at("settled_at_ms").get<int64_t>();
  return t;
}

nlohmann::json code_to_json(const RedeemCode& c) {
  nlohmann::json j{{"code", c.code},
                   {"state", c.state == CodeState::Active     ? "active"
                             : c.state == CodeState::Redeemed ? "redeemed"
                                                              : "expired"},
                   {"expires_at_ms", c.expires_at_ms},
                   {"redeemed_order_id", c.redeemed_order_id}};
  if (c.percent_ppm) j["percent_ppm"] = *c.percent_ppm;
  if (c.fixed) j["fixed"] = c.fixed->micros();
  return j;
}

RedeemCode code_from_json(const nlohmann::json& j) {
  RedeemCode c;
  c.code = j.at("code").get<std::string>();
  const std::string state = j.at("state").get<std::string>();
  c.state = state == "active"     ? CodeState::Active
            : state == "redeemed" ? CodeState::Redeemed
                                  : CodeState::Expired;
  c.expires_at_ms = j.at("expires_at_ms").get<int64_t>();
  c.redeemed_order_id = j.value("redeemed_order_id", std::string{});
  if (j.contains("percent_ppm")) c.percent_ppm = j.at("percent_ppm").get<int32_t>();
  if (j.contains("fixed")) c.fixed = Money::from_micros(j.at("fixed").get<int64_t>());
  return c;
}

std::string txn_key(const std::string& order_id) { return "txn:" + order_id; }

}  // namespace

BillingService::BillingService(Store& store, Clock& clock, cost::FixedCosts fixed,
                               cost::EnergyTariff tariff, cost::ShareWeights weights)
    : store_(store), clock_(clock), fixed_(fixed), tariff_(tariff), weights_(weights) {
  fixed_.validate();
  tariff_.validate();
  weights_.validate();
}

SettleResult BillingService::settle_order(const Order& order, const JobMetrics& metrics,
                                          const FilamentSpec& spool,
                                          const std::string& printer_id,
                                          const StakeholderIds& stakeholders) {
  if (auto existing = store_.try_get(Namespace::Billing, txn_key(order.order_id)))
    return SettleResult{txn_from_json(nlohmann::json::parse(existing->value)), false};
  if (order.state != OrderState::Completed)
    throw InvalidState(std::string("cannot settle order in state ") +
                       order_state_name(order.state));

  Transaction t;
  t.txn_id = "t-" + order.order_id;
  t.order_id = order.order_id;
  t.revenue = order.effective_revenue();
  t.breakdown =
      cost::breakdown_from_metrics(metrics.filament_used, spool, metrics.phase_energies, tariff_,
                                   fixed_, cost::RoundingMode::PaperCompat, t.revenue);
  t.allocation = cost::allocate_shares(t.revenue - t.breakdown.total, weights_);
  t.allocation.revenue = t.revenue;
  t.allocation.tco = t.breakdown.total;
  t.stakeholders = stakeholders;
  t.printer_id = printer_id;
  t.settled_at_ms = clock_.now_ms();

  try {
    store_.put(Namespace::Billing, txn_key(order.order_id), txn_to_json(t).dump(), 0);
  } catch (const VersionConflict&) {
    auto existing = store_.get(Namespace::Billing, txn_key(order.order_id));
    return SettleResult{txn_from_json(nlohmann::json::parse(existing.value)), false};
  }

  for (Stakeholder who : cost::kAllStakeholders) {
    LedgerEntry entry{t.txn_id + ":" + cost::stakeholder_name(who), who,
                      stakeholders.id_of(who), t.allocation.shares.at(who), t.txn_id};
    nlohmann::json doc{{"entry_id", entry.entry_id},
                       {"role", cost::stakeholder_name(entry.role)},
                       {"stakeholder_id", entry.stakeholder_id},
                       {"amount", entry.amount.micros()},
                       {"txn_id", entry.txn_id}};
    try {
      store_.put(Namespace::Billing, "ledger:" + entry.entry_id, doc.dump(), 0);
    } catch (const VersionConflict&) {
      // already appended by an earlier partial attempt
    }
  }
  CLOG(Debug, "billing") << "settled " << order.order_id << " revenue " << t.revenue.str()
                         << " profit " << t.allocation.profit.str();
  return SettleResult{t, true};
}

RedeemCode BillingService::create_redeem_code(std::optional<double> percent,
                                              std::optional<Money> fixed,
                                              int64_t expires_at_ms) {
  if (percent.has_value() == fixed.has_value()) throw BadDiscount();
  RedeemCode c;
  if (percent) {
    if (!(*percent > 0.0 && *percent <= 1.0)) throw BadDiscount();
    c.percent_ppm = static_cast<int32_t>(std::llround(*percent * 1e6));
  } else {
    if (fixed->is_negative()) throw BadDiscount();
    c.fixed = *fixed;
  }
  c.expires_at_ms = expires_at_ms;
  c.state = CodeState::Active;

  for (int attempt = 0; attempt < 16; ++attempt) {
    c.code = auth::random_code(12);
    try {
      store_.put(Namespace::RedeemCodes, c.code, code_to_json(c).dump(), 0);
      return c;
    } catch (const VersionConflict&) {
      // rare collision, draw again
    }
  }
  throw std::runtime_error("could not allocate a unique redeem code");
}

std::optional<RedeemCode> BillingService::load_code(const std::string& code,
                                                    uint64_t* version) const {
  auto rec = store_.try_get(Namespace::RedeemCodes, code);
  if (!rec) return std::nullopt;
  if (version) *version = rec->version;
  return code_from_json(nlohmann::json::parse(rec->value));
}

Money BillingService::redeem(const std::string& code, const std::string& order_id) {
  auto order_rec = store_.try_get(Namespace::Orders, order_id);
  if (!order_rec) throw InvalidState("unknown order: " + order_id);
  if (store_.try_get(Namespace::Billing, txn_key(order_id)))
    throw InvalidState("order already settled: " + order_id);

  // Claim the code first; the versioned write makes single-use atomic.
  RedeemCode c;
  while (true) {
    uint64_t version = 0;
    auto loaded = load_code(code, &version);
    if (!loaded) throw UnknownCode(code);
    c = *loaded;
    if (c.state == CodeState::Redeemed) throw AlreadyRedeemed();
    if (c.state == CodeState::Expired || clock_.now_ms() >= c.expires_at_ms) {
      if (c.state == CodeState::Active) {
        c.state = CodeState::Expired;
        try {
          store_.put(Namespace::RedeemCodes, code, code_to_json(c).dump(), version);
        } catch (const VersionConflict&) {
        }
      }
      throw CodeExpired();
    }
    c.state = CodeState::Redeemed;
    c.redeemed_order_id = order_id;
    try {
      store_.put(Namespace::RedeemCodes, code, code_to_json(c).dump(), version);
      break;
    } catch (const VersionConflict&) {
      // someone raced us; reload and re-check
    }
  }

  // Apply the discount to the order record.
  while (true) {
    auto rec = store_.get(Namespace::Orders, order_id);
    Order order = nlohmann::json::parse(rec.value).get<Order>();
    if (order.state == OrderState::Billed)
      throw InvalidState("order settled while redeeming: " + order_id);
    Money discount =
        c.fixed ? *c.fixed : order.sale_price.mul_div(*c.percent_ppm, 1'000'000);
    order.discount += discount;
    try {
      store_.put(Namespace::Orders, order_id, nlohmann::json(order).dump(), rec.version);
      return order.effective_revenue();
    } catch (const VersionConflict&) {
      // concurrent order update, retry
    }
  }
}

Money BillingService::ledger_balance(const std::string& stakeholder_id) const {
  Money sum;
  for (const auto& entry : ledger_entries(stakeholder_id)) sum += entry.amount;
  return sum;
}

std::vector<LedgerEntry> BillingService::ledger_entries(
    const std::string& stakeholder_filter) const {
  std::vector<LedgerEntry> out;
  for (const auto& [key, value] : store_.scan_prefix(Namespace::Billing, "ledger:")) {
    nlohmann::json j = nlohmann::json::parse(value);
    LedgerEntry entry;
    entry.entry_id = j.at("entry_id").get<std::string>();
    entry.role = cost::stakeholder_from_name(j.at("role").get<std::string>());
    entry.stakeholder_id = j.at("stakeholder_id").get<std::string>();
    entry.amount = Money::from_micros(j.at("amount").get<int64_t>());
    entry.txn_id = j.at("txn_id").get<std::string>();
    if (stakeholder_filter.empty() || entry.stakeholder_id == stakeholder_filter)
      out.push_back(std::move(entry));
  }
  return out;
}

std::vector<Transaction> BillingService::transactions() const {
  std::vector<Transaction> out;
  for (const auto& [key, value] : store_.scan_prefix(Namespace::Billing, "txn:"))
    out.push_back(txn_from_json(nlohmann::json::parse(value)));
  return out;
}

std::optional<Transaction> BillingService::find_transaction(const std::string& order_id) const {
  auto rec = store_.try_get(Namespace::Billing, txn_key(order_id));
  if (!rec) return std::nullopt;
  return txn_from_json(nlohmann::json::parse(rec->value));
}

void BillingService::export_ledger_csv(std::ostream& out) const {
  out << "entry_id,txn_id,role,stakeholder_id,amount_eur\n";
  for (const auto& e : ledger_entries())
    out << e.entry_id << ',' << e.txn_id << ',' << cost::stakeholder_name(e.role) << ','
        << e.stakeholder_id << ',' << e.amount.str() << '\n';
}

}  // namespace cloudcraft::billing
