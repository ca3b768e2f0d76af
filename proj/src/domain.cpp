#include "cloudcraft/domain.hpp"

#include <algorithm>

namespace cloudcraft {

void FilamentSpec::validate() const {
  if (spool_mass.milligrams <= 0) throw std::invalid_argument("spool mass must be positive");
  if (spool_price.is_negative()) throw std::invalid_argument("spool price must be >= 0");
  if (material_name.empty()) throw std::invalid_argument("material name empty");
}

void PrinterProfile::validate() const {
  if (printer_id.empty()) throw std::invalid_argument("printer id empty");
  filament.validate();
  if (unit_filament_mass.milligrams <= 0)
    throw std::invalid_argument("unit filament mass must be positive");
  if (!(unit_filament_mass <= filament.spool_mass))
    throw std::invalid_argument("unit filament mass exceeds spool mass");
  static constexpr std::array<Phase, 3> canonical = {Phase::PrePrint, Phase::Print,
                                                     Phase::PostPrint};
  for (size_t i = 0; i < phases.size(); ++i) {
    if (phases[i].phase != canonical[i])
      throw std::invalid_argument("phases must be pre_print, print, post_print in order");
    if (phases[i].duration.count() < 0) throw std::invalid_argument("phase duration negative");
    if (phases[i].energy.milliwatt_hours < 0) throw std::invalid_argument("phase energy negative");
  }
  location.validate();
}

std::chrono::milliseconds PrinterProfile::total_duration() const {
  std::chrono::milliseconds total{0};
  for (const auto& p : phases) total += p.duration;
  return total;
}

Energy PrinterProfile::total_energy() const {
  Energy total;
  for (const auto& p : phases) total += p.energy;
  return total;
}

const PhaseMetrics& PrinterProfile::phase(Phase p) const {
  return phases[static_cast<size_t>(p)];
}

void CadModel::validate() const {
  if (model_id.empty()) throw std::invalid_argument("model id empty");
  if (payload_digest.empty()) throw std::invalid_argument("payload digest empty");
  if (unit_filament_mass.milligrams <= 0)
    throw std::invalid_argument("unit filament mass must be positive");
}

const char* order_state_name(OrderState s) {
  switch (s) {
    case OrderState::Created: return "created";
    case OrderState::Routed: return "routed";
    case OrderState::Queued: return "queued";
    case OrderState::Printing: return "printing";
    case OrderState::Completed: return "completed";
    case OrderState::Billed: return "billed";
    case OrderState::Failed: return "failed";
    case OrderState::Cancelled: return "cancelled";
  }
  return "?";
}

OrderState order_state_from_name(const std::string& name) {
  for (OrderState s : kAllOrderStates)
    if (name == order_state_name(s)) return s;
  throw std::invalid_argument("unknown order state: " + name);
}

const char* order_event_name(OrderEvent e) {
  switch (e) {
    case OrderEvent::Route: return "route";
    case OrderEvent::Enqueue: return "enqueue";
    case OrderEvent::StartPrint: return "start_print";
    case OrderEvent::FinishPrint: return "finish_print";
    case OrderEvent::Bill: return "bill";
    case OrderEvent::Cancel: return "cancel";
    case OrderEvent::Fail: return "fail";
  }
  return "?";
}

IllegalTransition::IllegalTransition(OrderState s, OrderEvent e)
    : std::logic_error(std::string("illegal transition: ") + order_state_name(s) + " + " +
                       order_event_name(e)),
      state(s),
      event(e) {}

OrderState transition(OrderState state, OrderEvent event) {
  switch (event) {
    case OrderEvent::Route:
      if (state == OrderState::Created) return OrderState::Routed;
      break;
    case OrderEvent::Enqueue:
      if (state == OrderState::Routed) return OrderState::Queued;
      break;
    case OrderEvent::StartPrint:
      if (state == OrderState::Queued) return OrderState::Printing;
      break;
    case OrderEvent::FinishPrint:
      if (state == OrderState::Printing) return OrderState::Completed;
      break;
    case OrderEvent::Bill:
      if (state == OrderState::Completed) return OrderState::Billed;
      break;
    case OrderEvent::Cancel:
      if (state == OrderState::Created || state == OrderState::Routed ||
          state == OrderState::Queued)
        return OrderState::Cancelled;
      break;
    case OrderEvent::Fail:
      if (state == OrderState::Queued || state == OrderState::Printing)
        return OrderState::Failed;
      break;
  }
  throw IllegalTransition(state, event);
}

bool is_terminal(OrderState s) {
  return s == OrderState::Billed || s == OrderState::Failed || s == OrderState::Cancelled;
}

void to_json(nlohmann::json& j, const GeoPoint& v) {
  j = {{"lat", v.latitude}, {"lon", v.longitude}};
}

void from_json(const nlohmann::json& j, GeoPoint& v) {
  j.at("lat").get_to(v.latitude);
  j.at("lon").get_to(v.longitude);
}

void to_json(nlohmann::json& j, const FilamentSpec& v) {
  j = {{"spool_mass_mg", v.spool_mass.milligrams},
       {"spool_price_microeur", v.spool_price.micros()},
       {"material_name", v.material_name}};
}

void from_json(const nlohmann::json& j, FilamentSpec& v) {
  v.spool_mass = Mass::from_mg(j.at("spool_mass_mg").get<int64_t>());
  v.spool_price = Money::from_micros(j.at("spool_price_microeur").get<int64_t>());
  j.at("material_name").get_to(v.material_name);
}

void to_json(nlohmann::json& j, const PhaseMetrics& v) {
  j = {{"phase", phase_name(v.phase)},
       {"duration_ms", v.duration.count()},
       {"energy_mwh", v.energy.milliwatt_hours}};
}

void from_json(const nlohmann::json& j, PhaseMetrics& v) {
  v.phase = phase_from_name(j.at("phase").get<std::string>());
  v.duration = std::chrono::milliseconds(j.at("duration_ms").get<int64_t>());
  v.energy = Energy::from_mwh(j.at("energy_mwh").get<int64_t>());
}

void to_json(nlohmann::json& j, const PrinterProfile& v) {
  j = {{"printer_id", v.printer_id},
       {"model_name", v.model_name},
       {"filament", v.filament},
       {"unit_filament_mass_mg", v.unit_filament_mass.milligrams},
       {"phases", v.phases},
       {"capabilities", v.capabilities},
       {"location", v.location}};
}

void from_json(const nlohmann::json& j, PrinterProfile& v) {
  j.at("printer_id").get_to(v.printer_id);
  j.at("model_name").get_to(v.model_name);
  j.at("filament").get_to(v.filament);
  v.unit_filament_mass = Mass::from_mg(j.at("unit_filament_mass_mg").get<int64_t>());
  auto phases = j.at("phases");
  if (phases.size() != 3) throw std::invalid_argument("profile must list exactly 3 phases");
  for (size_t i = 0; i < 3; ++i) phases.at(i).get_to(v.phases[i]);
  j.at("capabilities").get_to(v.capabilities);
  j.at("location").get_to(v.location);
}

void to_json(nlohmann::json& j, const CadModel& v) {
  j = {{"model_id", v.model_id},
       {"designer_id", v.designer_id},
       {"display_name", v.display_name},
       {"payload_digest", v.payload_digest},
       {"required_material", v.required_material},
       {"unit_filament_mass_mg", v.unit_filament_mass.milligrams}};
}

void from_json(const nlohmann::json& j, CadModel& v) {
  j.at("model_id").get_to(v.model_id);
  j.at("designer_id").get_to(v.designer_id);
  j.at("display_name").get_to(v.display_name);
  j.at("payload_digest").get_to(v.payload_digest);
  j.at("required_material").get_to(v.required_material);
  v.unit_filament_mass = Mass::from_mg(j.at("unit_filament_mass_mg").get<int64_t>());
}

void to_json(nlohmann::json& j, const PhaseLogEntry& v) {
  j = {{"phase", phase_name(v.phase)},
       {"started_at_ms", v.started_at_ms},
       {"ended_at_ms", v.ended_at_ms},
       {"duration_ms", v.duration.count()},
       {"energy_mwh", v.energy.milliwatt_hours}};
}

void from_json(const nlohmann::json& j, PhaseLogEntry& v) {
  v.phase = phase_from_name(j.at("phase").get<std::string>());
  j.at("started_at_ms").get_to(v.started_at_ms);
  j.at("ended_at_ms").get_to(v.ended_at_ms);
  v.duration = std::chrono::milliseconds(j.at("duration_ms").get<int64_t>());
  v.energy = Energy::from_mwh(j.at("energy_mwh").get<int64_t>());
}

void to_json(nlohmann::json& j, const Order& v) {
  j = {{"order_id", v.order_id},
       {"model_id", v.model_id},
       {"webshop_id", v.webshop_id},
       {"customer_ref", v.customer_ref},
       {"sale_price_microeur", v.sale_price.micros()},
       {"discount_microeur", v.discount.micros()},
       {"state", order_state_name(v.state)},
       {"phase_log", v.phase_log},
       {"customer_location", v.customer_location},
       {"customization", v.customization},
       {"created_at_ms", v.created_at_ms}};
  if (v.assigned_printer) j["assigned_printer"] = *v.assigned_printer;
}

void from_json(const nlohmann::json& j, Order& v) {
  j.at("order_id").get_to(v.order_id);
  j.at("model_id").get_to(v.model_id);
  j.at("webshop_id").get_to(v.webshop_id);
  j.at("customer_ref").get_to(v.customer_ref);
  v.sale_price = Money::from_micros(j.at("sale_price_microeur").get<int64_t>());
  v.discount = Money::from_micros(j.value("discount_microeur", int64_t{0}));
  v.state = order_state_from_name(j.at("state").get<std::string>());
  v.phase_log = j.value("phase_log", std::vector<PhaseLogEntry>{});
  j.at("customer_location").get_to(v.customer_location);
  v.customization = j.value("customization", std::string{});
  j.at("created_at_ms").get_to(v.created_at_ms);
  if (j.contains("assigned_printer"))
    v.assigned_printer = j.at("assigned_printer").get<std::string>();
  else
    v.assigned_printer.reset();
}

}  // namespace cloudcraft
