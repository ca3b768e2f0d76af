#pragma once

#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cloudcraft/billing.hpp"
#include "cloudcraft/clock.hpp"
#include "cloudcraft/domain.hpp"
#include "cloudcraft/store.hpp"
#include "cloudcraft/wire.hpp"

namespace cloudcraft::fulfillment {

enum class Availability { Idle, Busy, Offline };

const char* availability_name(Availability a);

struct PrinterStatus {
  std::string printer_id;
  Availability availability = Availability::Offline;
  int queue_depth = 0;
  PrinterProfile profile;
  std::string operator_id;
};

struct PrintJob {
  std::string job_id;
  std::string order_id;
  std::string printer_id;
  std::string model_id;
  int64_t enqueued_at_ms = 0;
  bool accepted = false;
  std::vector<PhaseMetrics> phase_log;  // completed phases, canonical order
  std::optional<Phase> phase_in_progress;
  int64_t phase_started_at_ms = 0;
  int64_t telemetry_samples = 0;
  Energy last_meter_reading;
};

class UnknownModel : public std::runtime_error {
 public:
  explicit UnknownModel(const std::string& id) : std::runtime_error("unknown model: " + id) {}
};

class NoCapablePrinter : public std::runtime_error {
 public:
  explicit NoCapablePrinter(const std::string& order_id = {})
      : std::runtime_error("no capable printer available"), order_id(order_id) {}
  std::string order_id;  // set when an order was created but not routed
};

class DuplicatePrinter : public std::runtime_error {
 public:
  explicit DuplicatePrinter(const std::string& id)
      : std::runtime_error("printer already registered: " + id) {}
};

class UnknownPrinter : public std::runtime_error {
 public:
  explicit UnknownPrinter(const std::string& id) : std::runtime_error("unknown printer: " + id) {}
};

class UnknownJob : public std::runtime_error {
 public:
  explicit UnknownJob(const std::string& id) : std::runtime_error("unknown job: " + id) {}
};

class PhaseOrderViolation : public std::runtime_error {
 public:
  explicit PhaseOrderViolation(const std::string& why)
      : std::runtime_error("phase order violation: " + why) {}
};

class IncompletePhaseLog : public std::runtime_error {
 public:
  IncompletePhaseLog() : std::runtime_error("phase log incomplete") {}
};

// Push channel to a connected printer agent; the cloud gateway implements
// it. Returns false when the agent is unreachable.
class AgentLink {
 public:
  virtual ~AgentLink() = default;
  virtual bool send_job_assign(const std::string& printer_id, const PrintJob& job,
                               Mass unit_filament_mass) = 0;
};

struct RegisteredPrinterInfo {
  PrinterProfile profile;
  std::string operator_id;
  std::string agent_key;
};

// Order and printer services: order lifecycle, nearest-capable routing,
// FIFO queues per printer, dispatch, and progress tracking from agent
// events.
class FulfillmentService {
 public:
  FulfillmentService(Store& store, Clock& clock, billing::BillingService& billing,
                     std::string platform_account = "platform");

  void set_agent_link(AgentLink* link) { link_ = link; }

  CadModel upload_model(CadModel model);
  std::optional<CadModel> find_model(const std::string& model_id) const;

  // Returns the generated agent key the printer's agent authenticates with.
  std::string register_printer(PrinterProfile profile, const std::string& operator_id);
  std::optional<RegisteredPrinterInfo> printer_info(const std::string& printer_id) const;
  std::vector<PrinterStatus> printer_statuses() const;

  Order create_order(const std::string& webshop_id, const std::string& model_id,
                     Money sale_price, const std::string& customer_ref,
                     const GeoPoint& customer_location, const std::string& customization = {});
  Order reroute_order(const std::string& order_id);
  Order get_order(const std::string& order_id) const;
  std::map<OrderState, int> order_counts() const;

  // Nearest capable printer on a snapshot: availability != Offline and
  // required material stocked; haversine distance, ties by queue depth,
  // then id. Capacity checks are a stub (all profiles can print the test
  // product).
  static std::string select_printer(const std::string& required_material, Mass unit_mass,
                                    const GeoPoint& customer_location,
                                    const std::vector<PrinterStatus>& snapshot);

  PrintJob enqueue_job(const std::string& order_id);
  void dispatch_next(const std::string& printer_id);

  // Agent event entry points (driven by the cloud gateway).
  void agent_connected(const std::string& printer_id);
  void agent_disconnected(const std::string& printer_id);
  void on_job_accept(const std::string& printer_id, const std::string& job_id);
  void record_progress(const std::string& job_id, const net::AgentMessage& event);
  void complete_job(const std::string& job_id, Mass filament_used);
  void fail_job(const std::string& job_id, const std::string& reason);

  void retry_pending_settlements();
  size_t pending_settlement_count() const;

  std::optional<PrintJob> find_job(const std::string& job_id) const;

 private:
  struct RuntimePrinter {
    PrinterProfile profile;
    std::string operator_id;
    std::string agent_key;
    Availability availability = Availability::Offline;
    std::deque<std::string> queue;                 // job ids, FIFO
    std::optional<std::string> pending_accept_job; // assigned, not yet accepted
    std::optional<std::string> active_job;         // accepted, printing
  };

  struct PendingSettlement {
    std::string order_id;
    std::string printer_id;
    billing::JobMetrics metrics;
  };

  Order load_order(const std::string& order_id) const;
  Order update_order(const std::string& order_id, const std::function<void(Order&)>& mutate);
  std::string next_order_id(const std::string& webshop_id);
  std::vector<PrinterStatus> statuses_locked() const;
  void route_and_enqueue_locked(Order& order);
  void dispatch_locked(const std::string& printer_id);
  void evacuate_locked(const std::string& printer_id);
  void reassign_job_locked(const std::string& job_id);
  void settle_and_bill(const std::string& order_id, const std::string& printer_id,
                       const billing::JobMetrics& metrics);

  Store& store_;
  Clock& clock_;
  billing::BillingService& billing_;
  std::string platform_account_;
  AgentLink* link_ = nullptr;

  mutable std::mutex mu_;
  std::map<std::string, RuntimePrinter> printers_;
  std::map<std::string, PrintJob> jobs_;
  std::map<std::string, PendingSettlement> pending_settlements_;
  uint64_t order_seq_ = 0;
};

}  // namespace cloudcraft::fulfillment
