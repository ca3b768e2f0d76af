#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloudcraft/geo.hpp"
#include "cloudcraft/money.hpp"
#include "cloudcraft/units.hpp"

namespace cloudcraft {

struct FilamentSpec {
  Mass spool_mass;        // mass of filament per spool
  Money spool_price;      // price per spool
  std::string material_name;

  void validate() const;
};

// A registered printer: filament on the spool, per-phase durations and
// energies for one unit of the test product, and where it sits.
struct PrinterProfile {
  std::string printer_id;
  std::string model_name;
  FilamentSpec filament;
  Mass unit_filament_mass;  // filament consumed per unit produced
  std::array<PhaseMetrics, 3> phases;  // PrePrint, Print, PostPrint
  std::set<std::string> capabilities;  // material names
  GeoPoint location;

  void validate() const;
  std::chrono::milliseconds total_duration() const;
  Energy total_energy() const;
  const PhaseMetrics& phase(Phase p) const;
};

struct CadModel {
  std::string model_id;
  std::string designer_id;
  std::string display_name;
  std::string payload_digest;  // opaque content hash
  std::string required_material;
  Mass unit_filament_mass;     // nominal, per design

  void validate() const;
};

enum class OrderState {
  Created,
  Routed,
  Queued,
  Printing,
  Completed,
  Billed,
  Failed,
  Cancelled,
};

enum class OrderEvent {
  Route,
  Enqueue,
  StartPrint,
  FinishPrint,
  Bill,
  Cancel,
  Fail,
};

inline constexpr std::array<OrderState, 8> kAllOrderStates = {
    OrderState::Created,  OrderState::Routed, OrderState::Queued,
    OrderState::Printing, OrderState::Completed, OrderState::Billed,
    OrderState::Failed,   OrderState::Cancelled};

inline constexpr std::array<OrderEvent, 7> kAllOrderEvents = {
    OrderEvent::Route, OrderEvent::Enqueue,  OrderEvent::StartPrint,
    OrderEvent::FinishPrint, OrderEvent::Bill, OrderEvent::Cancel,
    OrderEvent::Fail};

const char* order_state_name(OrderState s);
OrderState order_state_from_name(const std::string& name);
const char* order_event_name(OrderEvent e);

class IllegalTransition : public std::logic_error {
 public:
  IllegalTransition(OrderState state, OrderEvent event);
  OrderState state;
  OrderEvent event;
};

// Pure successor function of the order lifecycle. Throws
// IllegalTransition when no edge exists for (state, event).
OrderState transition(OrderState state, OrderEvent event);

bool is_terminal(OrderState s);

struct PhaseLogEntry {
  Phase phase = Phase::PrePrint;
  int64_t started_at_ms = 0;  // receipt time at the platform
  int64_t ended_at_ms = 0;
  std::chrono::milliseconds duration{0};  // as reported by the agent
  Energy energy;
};

struct Order {
  std::string order_id;
  std::string model_id;
  std::string webshop_id;
  std::string customer_ref;
  Money sale_price;
  Money discount;  // applied at settlement, floor at zero revenue
  OrderState state = OrderState::Created;
  std::optional<std::string> assigned_printer;
  std::vector<PhaseLogEntry> phase_log;
  GeoPoint customer_location;
  std::string customization;  // free-form, not interpreted
  int64_t created_at_ms = 0;

  Money effective_revenue() const {
    Money r = sale_price - discount;
    return r.is_negative() ? Money{} : r;
  }
};

void to_json(nlohmann::json& j, const FilamentSpec& v);
void from_json(const nlohmann::json& j, FilamentSpec& v);
void to_json(nlohmann::json& j, const PhaseMetrics& v);
void from_json(const nlohmann::json& j, PhaseMetrics& v);
void to_json(nlohmann::json& j, const PrinterProfile& v);
void from_json(const nlohmann::json& j, PrinterProfile& v);
void to_json(nlohmann::json& j, const CadModel& v);
void from_json(const nlohmann::json& j, CadModel& v);
void to_json(nlohmann::json& j, const GeoPoint& v);
void from_json(const nlohmann::json& j, GeoPoint& v);
void to_json(nlohmann::json& j, const PhaseLogEntry& v);
void from_json(const nlohmann::json& j, PhaseLogEntry& v);
void to_json(nlohmann::json& j, const Order& v);
void from_json(const nlohmann::json& j, Order& v);

}  // namespace cloudcraft
