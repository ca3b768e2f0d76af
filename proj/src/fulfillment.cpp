#include "cloudcraft/fulfillment.hpp"

#include <algorithm>

#include <json.hpp>

#include "cloudcraft/auth.hpp"
#include "cloudcraft/geo.hpp"
#include "cloudcraft/log.hpp"

namespace cloudcraft::fulfillment {

namespace {
constexpr std::array<Phase, 3> kCanonicalPhases = {Phase::PrePrint, Phase::Print,
                                                   Phase::PostPrint};
}

const char* availability_name(Availability a) {
  switch (a) {
    case Availability::Idle: return "idle";
    case Availability::Busy: return "busy";
    case Availability::Offline: return "offline";
  }
  return "?";
}

FulfillmentService::FulfillmentService(Store& store, Clock& clock,
                                       billing::BillingService& billing,
                                       std::string platform_account)
    : store_(store), clock_(clock), billing_(billing),
      platform_account_(std::move(platform_account)) {
  for (const auto& [printer_id, value] : store_.scan_prefix(Namespace::Printers, "")) {
    nlohmann::json doc = nlohmann::json::parse(value);
    RuntimePrinter rt;
    rt.profile = doc.at("profile").get<PrinterProfile>();
    rt.operator_id = doc.at("operator_id").get<std::string>();
    rt.agent_key = doc.at("agent_key").get<std::string>();
    printers_.emplace(printer_id, std::move(rt));
  }
  order_seq_ = store_.scan_prefix(Namespace::Orders, "").size();
}

CadModel FulfillmentService::upload_model(CadModel model) {
  model.validate();
  store_.put(Namespace::Models, model.model_id, nlohmann::json(model).dump());
  return model;
}

std::optional<CadModel> FulfillmentService::find_model(const std::string& model_id) const {
  auto rec = store_.try_get(Namespace::Models, model_id);
  if (!rec) return std::nullopt;
  return nlohmann::json::parse(rec->value).get<CadModel>();
}

std::string FulfillmentService::register_printer(PrinterProfile profile,
                                                 const std::string& operator_id) {
  profile.validate();
  const std::string agent_key = auth::random_hex(16);
  nlohmann::json doc{
      {"profile", profile}, {"operator_id", operator_id}, {"agent_key", agent_key}};
  try {
    store_.put(Namespace::Printers, profile.printer_id, doc.dump(), 0);
  } catch (const VersionConflict&) {
    throw DuplicatePrinter(profile.printer_id);
  }
  std::lock_guard lock(mu_);
  RuntimePrinter rt;
  rt.profile = std::move(profile);
  rt.operator_id = operator_id;
  rt.agent_key = agent_key;
  printers_.emplace(rt.profile.printer_id, std::move(rt));
  return agent_key;
}

std::optional<RegisteredPrinterInfo> FulfillmentService::printer_info(
    const std::string& printer_id) const {
  std::lock_guard lock(mu_);
  auto it = printers_.find(printer_id);
  if (it == printers_.end()) return std::nullopt;
  return RegisteredPrinterInfo{it->second.profile, it->second.operator_id,
                               it->second.agent_key};
}

std::vector<PrinterStatus> FulfillmentService::statuses_locked() const {
  std::vector<PrinterStatus> out;
  out.reserve(printers_.size());
  for (const auto& [id, rt] : printers_) {
    PrinterStatus s;
    s.printer_id = id;
    s.availability = rt.availability;
    s.queue_depth = static_cast<int>(rt.queue.size());
    s.profile = rt.profile;
    s.operator_id = rt.operator_id;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PrinterStatus> FulfillmentService::printer_statuses() const {
  std::lock_guard lock(mu_);
  return statuses_locked();
}

Order FulfillmentService::load_order(const std::string& order_id) const {
  auto rec = store_.get(Namespace::Orders, order_id);
  return nlohmann::json::parse(rec.value).get<Order>();
}

Order FulfillmentService::update_order(const std::string& order_id,
                                       const std::function<void(Order&)>& mutate) {
  while (true) {
    auto rec = store_.get(Namespace::Orders, order_id);
    Order order = nlohmann::json::parse(rec.value).get<Order>();
    mutate(order);
    try {
      store_.put(Namespace::Orders, order_id, nlohmann::json(order).dump(), rec.version);
      return order;
    } catch (const VersionConflict&) {
      // concurrent writer, reload and retry
    }
  }
}

std::string FulfillmentService::next_order_id(const std::string& webshop_id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(++order_seq_));
  return webshop_id + "-" + buf;
}

std::string FulfillmentService::select_printer(const std::string& required_material,
                                               Mass unit_mass,
                                               const GeoPoint& customer_location,
                                               const std::vector<PrinterStatus>& snapshot) {
  (void)unit_mass;  // capacity check stub: every registered profile fits the product
  const PrinterStatus* best = nullptr;
  double best_distance = 0.0;
  for (const auto& s : snapshot) {
    if (s.availability == Availability::Offline) continue;
    if (!s.profile.capabilities.count(required_material)) continue;
    const double d = haversine_m(customer_location, s.profile.location);
    if (best == nullptr || d < best_distance ||
        (d == best_distance && (s.queue_depth < best->queue_depth ||
                                (s.queue_depth == best->queue_depth &&
                                 s.printer_id < best->printer_id)))) {
      best = &s;
      best_distance = d;
    }
  }
  if (!best) throw NoCapablePrinter();
  return best->printer_id;
}

Order FulfillmentService::create_order(const std::string& webshop_id,
                                       const std::string& model_id, Money sale_price,
                                       const std::string& customer_ref,
                                       const GeoPoint& customer_location,
                                       const std::string& customization) {
  auto model = find_model(model_id);
  if (!model) throw UnknownModel(model_id);
  customer_location.validate();

  Order order;
  order.model_id = model_id;
  order.webshop_id = webshop_id;
  order.customer_ref = customer_ref;
  order.sale_price = sale_price;
  order.state = OrderState::Created;
  order.customer_location = customer_location;
  order.customization = customization;
  order.created_at_ms = clock_.now_ms();

  std::lock_guard lock(mu_);
  while (true) {
    order.order_id = next_order_id(webshop_id);
    try {
      store_.put(Namespace::Orders, order.order_id, nlohmann::json(order).dump(), 0);
      break;
    } catch (const VersionConflict&) {
      // id taken by an earlier run against the same store; draw the next
    }
  }
  route_and_enqueue_locked(order);
  return load_order(order.order_id);
}

Order FulfillmentService::reroute_order(const std::string& order_id) {
  std::lock_guard lock(mu_);
  Order order = load_order(order_id);
  if (order.state != OrderState::Created)
    throw IllegalTransition(order.state, OrderEvent::Route);
  route_and_enqueue_locked(order);
  return load_order(order_id);
}

void FulfillmentService::route_and_enqueue_locked(Order& order) {
  auto model = find_model(order.model_id);
  if (!model) throw UnknownModel(order.model_id);

  std::string printer_id;
  try {
    printer_id = select_printer(model->required_material, model->unit_filament_mass,
                                order.customer_location, statuses_locked());
  } catch (const NoCapablePrinter&) {
    throw NoCapablePrinter(order.order_id);  // order stays Created for a later reroute
  }

  update_order(order.order_id, [&](Order& o) {
    o.state = transition(o.state, OrderEvent::Route);
    o.assigned_printer = printer_id;
  });

  PrintJob job;
  job.job_id = "j-" + order.order_id;
  job.order_id = order.order_id;
  job.printer_id = printer_id;
  job.model_id = order.model_id;
  job.enqueued_at_ms = clock_.now_ms();
  jobs_[job.job_id] = job;
  printers_.at(printer_id).queue.push_back(job.job_id);
  update_order(order.order_id,
               [](Order& o) { o.state = transition(o.state, OrderEvent::Enqueue); });
  CLOG(Debug, "fulfillment") << "order " << order.order_id << " queued on " << printer_id;
  dispatch_locked(printer_id);
}

PrintJob FulfillmentService::enqueue_job(const std::string& order_id) {
  std::lock_guard lock(mu_);
  Order order = load_order(order_id);
  // transition() is the gate: anything but Routed raises IllegalTransition
  Order updated = update_order(
      order_id, [](Order& o) { o.state = transition(o.state, OrderEvent::Enqueue); });
  if (!updated.assigned_printer) throw UnknownPrinter("(order has no assigned printer)");

  PrintJob job;
  job.job_id = "j-" + order_id;
  job.order_id = order_id;
  job.printer_id = *updated.assigned_printer;
  job.model_id = updated.model_id;
  job.enqueued_at_ms = clock_.now_ms();
  jobs_[job.job_id] = job;
  printers_.at(job.printer_id).queue.push_back(job.job_id);
  dispatch_locked(job.printer_id);
  return jobs_.at(job.job_id);
}

void FulfillmentService::dispatch_next(const std::string& printer_id) {
  std::lock_guard lock(mu_);
  dispatch_locked(printer_id);
}

void FulfillmentService::dispatch_locked(const std::string& printer_id) {
  auto it = printers_.find(printer_id);
  if (it == printers_.end()) throw UnknownPrinter(printer_id);
  RuntimePrinter& rt = it->second;
  if (rt.availability != Availability::Idle) return;
  if (rt.pending_accept_job || rt.active_job) return;
  if (rt.queue.empty()) return;

  const std::string job_id = rt.queue.front();
  const PrintJob& job = jobs_.at(job_id);
  if (!link_ || !link_->send_job_assign(printer_id, job, rt.profile.unit_filament_mass)) {
    CLOG(Warn, "fulfillment") << "agent unreachable, taking " << printer_id << " offline";
    rt.availability = Availability::Offline;
    evacuate_locked(printer_id);
    return;
  }
  rt.queue.pop_front();
  rt.pending_accept_job = job_id;
  rt.availability = Availability::Busy;
  CLOG(Debug, "fulfillment") << "assigned " << job_id << " to " << printer_id;
}

void FulfillmentService::evacuate_locked(const std::string& printer_id) {
  RuntimePrinter& rt = printers_.at(printer_id);
  std::vector<std::string> displaced;
  if (rt.pending_accept_job) {
    displaced.push_back(*rt.pending_accept_job);
    rt.pending_accept_job.reset();
  }
  displaced.insert(displaced.end(), rt.queue.begin(), rt.queue.end());
  rt.queue.clear();
  for (const auto& job_id : displaced) reassign_job_locked(job_id);
}

void FulfillmentService::reassign_job_locked(const std::string& job_id) {
  PrintJob& job = jobs_.at(job_id);
  auto model = find_model(job.model_id);
  if (!model) return;
  std::string new_printer;
  try {
    new_printer = select_printer(model->required_material, model->unit_filament_mass,
                                 load_order(job.order_id).customer_location, statuses_locked());
  } catch (const NoCapablePrinter&) {
    // nowhere to go: park it back on its (offline) printer until the
    // agent returns
    printers_.at(job.printer_id).queue.push_back(job_id);
    CLOG(Warn, "fulfillment") << job_id << " has no alternative printer, parked";
    return;
  }
  job.printer_id = new_printer;
  printers_.at(new_printer).queue.push_back(job_id);
  update_order(job.order_id, [&](Order& o) { o.assigned_printer = new_printer; });
  CLOG(Info, "fulfillment") << job_id << " re-routed to " << new_printer;
  dispatch_locked(new_printer);
}

void FulfillmentService::agent_connected(const std::string& printer_id) {
  {
    std::lock_guard lock(mu_);
    auto it = printers_.find(printer_id);
    if (it == printers_.end()) throw UnknownPrinter(printer_id);
    if (!it->second.active_job && !it->second.pending_accept_job)
      it->second.availability = Availability::Idle;
    dispatch_locked(printer_id);
  }
  // A new capable printer may unblock orders parked in Created.
  std::vector<std::string> created;
  for (const auto& [key, value] : store_.scan_prefix(Namespace::Orders, "")) {
    Order o = nlohmann::json::parse(value).get<Order>();
    if (o.state == OrderState::Created) created.push_back(o.order_id);
  }
  for (const auto& id : created) {
    try {
      reroute_order(id);
    } catch (const NoCapablePrinter&) {
    } catch (const IllegalTransition&) {
    }
  }
}

void FulfillmentService::agent_disconnected(const std::string& printer_id) {
  std::lock_guard lock(mu_);
  auto it = printers_.find(printer_id);
  if (it == printers_.end()) return;
  RuntimePrinter& rt = it->second;
  rt.availability = Availability::Offline;
  if (rt.active_job) {
    const std::string job_id = *rt.active_job;
    rt.active_job.reset();
    const std::string order_id = jobs_.at(job_id).order_id;
    update_order(order_id, [](Order& o) { o.state = transition(o.state, OrderEvent::Fail); });
    CLOG(Warn, "fulfillment") << "agent for " << printer_id << " lost mid-print, order "
                              << order_id << " failed";
  }
  evacuate_locked(printer_id);
}

void FulfillmentService::on_job_accept(const std::string& printer_id,
                                       const std::string& job_id) {
  std::lock_guard lock(mu_);
  auto it = printers_.find(printer_id);
  if (it == printers_.end()) throw UnknownPrinter(printer_id);
  RuntimePrinter& rt = it->second;
  if (!rt.pending_accept_job || *rt.pending_accept_job != job_id) throw UnknownJob(job_id);
  rt.pending_accept_job.reset();
  rt.active_job = job_id;
  PrintJob& job = jobs_.at(job_id);
  job.accepted = true;
  update_order(job.order_id,
               [](Order& o) { o.state = transition(o.state, OrderEvent::StartPrint); });
}

void FulfillmentService::record_progress(const std::string& job_id,
                                         const net::AgentMessage& event) {
  std::lock_guard lock(mu_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw UnknownJob(job_id);
  PrintJob& job = it->second;
  if (!job.accepted) throw UnknownJob(job_id + " (not printing)");

  switch (event.kind) {
    case net::MsgKind::PhaseStarted: {
      const Phase phase = phase_from_name(event.body.at("phase").get<std::string>());
      if (job.phase_in_progress)
        throw PhaseOrderViolation("phase started while another is in progress");
      if (job.phase_log.size() >= 3 || phase != kCanonicalPhases[job.phase_log.size()])
        throw PhaseOrderViolation(std::string("expected ") +
                                  (job.phase_log.size() < 3
                                       ? phase_name(kCanonicalPhases[job.phase_log.size()])
                                       : "no more phases") +
                                  ", got " + phase_name(phase));
      job.phase_in_progress = phase;
      job.phase_started_at_ms = clock_.now_ms();
      break;
    }
    case net::MsgKind::PhaseCompleted: {
      const Phase phase = phase_from_name(event.body.at("phase").get<std::string>());
      if (!job.phase_in_progress || *job.phase_in_progress != phase)
        throw PhaseOrderViolation(std::string("completion for ") + phase_name(phase) +
                                  " without matching start");
      PhaseMetrics m;
      m.phase = phase;
      m.duration = std::chrono::milliseconds(event.body.at("duration_ms").get<int64_t>());
      m.energy = Energy::from_mwh(event.body.at("energy_mwh").get<int64_t>());
      job.phase_log.push_back(m);
      job.phase_in_progress.reset();

      PhaseLogEntry entry;
      entry.phase = phase;
      entry.started_at_ms = job.phase_started_at_ms;
      entry.ended_at_ms = clock_.now_ms();
      entry.duration = m.duration;
      entry.energy = m.energy;
      update_order(job.order_id, [&](Order& o) { o.phase_log.push_back(entry); });
      break;
    }
    case net::MsgKind::MeterSample: {
      job.telemetry_samples += 1;
      job.last_meter_reading =
          Energy::from_mwh(event.body.value("cumulative_mwh", int64_t{0}));
      break;
    }
    default:
      throw net::MalformedMessage("record_progress cannot handle " +
                                  std::string(net::msg_kind_name(event.kind)));
  }
}

void FulfillmentService::complete_job(const std::string& job_id, Mass filament_used) {
  std::string printer_id;
  std::string order_id;
  billing::JobMetrics metrics;
  {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw UnknownJob(job_id);
    PrintJob& job = it->second;
    if (job.phase_log.size() != 3) throw IncompletePhaseLog();

    metrics.filament_used = filament_used;
    for (size_t i = 0; i < 3; ++i) {
      metrics.phase_durations[i] = job.phase_log[i].duration;
      metrics.phase_energies[i] = job.phase_log[i].energy;
    }
    printer_id = job.printer_id;
    order_id = job.order_id;

    update_order(order_id,
                 [](Order& o) { o.state = transition(o.state, OrderEvent::FinishPrint); });
    RuntimePrinter& rt = printers_.at(printer_id);
    if (rt.active_job == job_id) rt.active_job.reset();
    if (rt.availability != Availability::Offline) rt.availability = Availability::Idle;
  }
  dispatch_next(printer_id);
  settle_and_bill(order_id, printer_id, metrics);
}

void FulfillmentService::fail_job(const std::string& job_id, const std::string& reason) {
  std::string printer_id;
  {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw UnknownJob(job_id);
    PrintJob& job = it->second;
    printer_id = job.printer_id;
    update_order(job.order_id,
                 [](Order& o) { o.state = transition(o.state, OrderEvent::Fail); });
    RuntimePrinter& rt = printers_.at(printer_id);
    if (rt.active_job == job_id) rt.active_job.reset();
    if (rt.pending_accept_job == job_id) rt.pending_accept_job.reset();
    if (rt.availability != Availability::Offline) rt.availability = Availability::Idle;
    CLOG(Warn, "fulfillment") << job_id << " failed: " << reason;
  }
  dispatch_next(printer_id);
}

void FulfillmentService::settle_and_bill(const std::string& order_id,
                                         const std::string& printer_id,
                                         const billing::JobMetrics& metrics) {
  try {
    Order order = load_order(order_id);
    if (order.state == OrderState::Billed) return;

    auto info = printer_info(printer_id);
    if (!info) throw UnknownPrinter(printer_id);
    auto model = find_model(order.model_id);
    if (!model) throw UnknownModel(order.model_id);

    billing::StakeholderIds ids;
    ids.platform = platform_account_;
    ids.printer_operator = info->operator_id;
    ids.webshop_operator = order.webshop_id;
    ids.designer = model->designer_id;

    billing_.settle_order(order, metrics, info->profile.filament, printer_id, ids);
    update_order(order_id, [](Order& o) {
      if (o.state == OrderState::Completed) o.state = transition(o.state, OrderEvent::Bill);
    });
    {
      std::lock_guard lock(mu_);
      pending_settlements_.erase(order_id);
    }
  } catch (const StorageUnavailable& e) {
    CLOG(Warn, "fulfillment") << "settlement of " << order_id << " deferred: " << e.what();
    std::lock_guard lock(mu_);
    pending_settlements_[order_id] = PendingSettlement{order_id, printer_id, metrics};
  }
}

void FulfillmentService::retry_pending_settlements() {
  std::vector<PendingSettlement> pending;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, p] : pending_settlements_) pending.push_back(p);
  }
  for (const auto& p : pending) settle_and_bill(p.order_id, p.printer_id, p.metrics);
}

size_t FulfillmentService::pending_settlement_count() const {
  std::lock_guard lock(mu_);
  return pending_settlements_.size();
}

Order FulfillmentService::get_order(const std::string& order_id) const {
  return load_order(order_id);
}

std::map<OrderState, int> FulfillmentService::order_counts() const {
  std::map<OrderState, int> counts;
  for (const auto& [key, value] : store_.scan_prefix(Namespace::Orders, "")) {
    Order o = nlohmann::json::parse(value).get<Order>();
    counts[o.state] += 1;
  }
  return counts;
}

std::optional<PrintJob> FulfillmentService::find_job(const std::string& job_id) const {
  std::lock_guard lock(mu_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

}  // namespace cloudcraft::fulfillment
