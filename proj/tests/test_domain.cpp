#include <doctest.h>

#include <set>

#include "cloudcraft/domain.hpp"

using namespace cloudcraft;

namespace {

PrinterProfile sample_profile() {
  PrinterProfile p;
  p.printer_id = "p1";
  p.model_name = "Test Printer";
  p.filament = FilamentSpec{Mass::from_mg(750'000), Money::parse("42.99"), "PLA"};
  p.unit_filament_mass = Mass::from_mg(2'900);
  p.phases = {PhaseMetrics{Phase::PrePrint, std::chrono::milliseconds(198'000),
                           Energy::from_mwh(12'280)},
              PhaseMetrics{Phase::Print, std::chrono::milliseconds(2'105'000),
                           Energy::from_mwh(77'930)},
              PhaseMetrics{Phase::PostPrint, std::chrono::milliseconds(352'000),
                           Energy::from_mwh(520)}};
  p.capabilities = {"PLA"};
  p.location = GeoPoint{48.2082, 16.3738};
  return p;
}

}  // namespace

TEST_CASE("declared transitions succeed") {
  CHECK(transition(OrderState::Created, OrderEvent::Route) == OrderState::Routed);
  CHECK(transition(OrderState::Routed, OrderEvent::Enqueue) == OrderState::Queued);
  CHECK(transition(OrderState::Queued, OrderEvent::StartPrint) == OrderState::Printing);
  CHECK(transition(OrderState::Printing, OrderEvent::FinishPrint) == OrderState::Completed);
  CHECK(transition(OrderState::Completed, OrderEvent::Bill) == OrderState::Billed);
  CHECK(transition(OrderState::Printing, OrderEvent::Fail) == OrderState::Failed);
  CHECK(transition(OrderState::Queued, OrderEvent::Fail) == OrderState::Failed);
  CHECK(transition(OrderState::Created, OrderEvent::Cancel) == OrderState::Cancelled);
  CHECK(transition(OrderState::Routed, OrderEvent::Cancel) == OrderState::Cancelled);
  CHECK(transition(OrderState::Queued, OrderEvent::Cancel) == OrderState::Cancelled);
}

TEST_CASE("illegal transitions are rejected and enumerable") {
  CHECK_THROWS_AS(transition(OrderState::Completed, OrderEvent::StartPrint), IllegalTransition);

  // Exhaustive closure over all 8x7 pairs: exactly the declared edges exist.
  const std::set<std::pair<OrderState, OrderEvent>> legal = {
      {OrderState::Created, OrderEvent::Route},
      {OrderState::Routed, OrderEvent::Enqueue},
      {OrderState::Queued, OrderEvent::StartPrint},
      {OrderState::Printing, OrderEvent::FinishPrint},
      {OrderState::Completed, OrderEvent::Bill},
      {OrderState::Created, OrderEvent::Cancel},
      {OrderState::Routed, OrderEvent::Cancel},
      {OrderState::Queued, OrderEvent::Cancel},
      {OrderState::Queued, OrderEvent::Fail},
      {OrderState::Printing, OrderEvent::Fail},
  };
  int edges = 0;
  for (OrderState s : kAllOrderStates) {
    for (OrderEvent e : kAllOrderEvents) {
      if (legal.count({s, e})) {
        CHECK_NOTHROW(transition(s, e));
        ++edges;
      } else {
        CHECK_THROWS_AS(transition(s, e), IllegalTransition);
      }
    }
  }
  CHECK(edges == 10);
}

TEST_CASE("profile validation enforces canonical phase order") {
  PrinterProfile p = sample_profile();
  CHECK_NOTHROW(p.validate());

  std::swap(p.phases[0], p.phases[1]);
  CHECK_THROWS(p.validate());

  p = sample_profile();
  p.unit_filament_mass = Mass::from_mg(750'001);
  CHECK_THROWS(p.validate());

  p = sample_profile();
  p.location.latitude = 91.0;
  CHECK_THROWS(p.validate());
}

TEST_CASE("order round-trips through json") {
  Order o;
  o.order_id = "exp-0001";
  o.model_id = "ring";
  o.webshop_id = "exp";
  o.customer_ref = "cust-7";
  o.sale_price = Money::parse("10.00");
  o.state = OrderState::Printing;
  o.assigned_printer = "k1max";
  o.phase_log.push_back(PhaseLogEntry{Phase::PrePrint, 1000, 2000,
                                      std::chrono::milliseconds(254'000),
                                      Energy::from_mwh(14'180)});
  o.customer_location = GeoPoint{47.1, 15.4};
  o.created_at_ms = 1234;

  nlohmann::json j = o;
  Order back = j.get<Order>();
  CHECK(back.order_id == o.order_id);
  CHECK(back.state == OrderState::Printing);
  CHECK(back.assigned_printer == o.assigned_printer);
  CHECK(back.sale_price == o.sale_price);
  CHECK(back.phase_log.size() == 1);
  CHECK(back.phase_log[0].energy.milliwatt_hours == 14'180);
}

TEST_CASE("profile json keeps exact integer base units") {
  PrinterProfile p = sample_profile();
  nlohmann::json j = p;
  PrinterProfile back = j.get<PrinterProfile>();
  CHECK(back.filament.spool_price == p.filament.spool_price);
  CHECK(back.unit_filament_mass.milligrams == 2'900);
  CHECK(back.phases[1].energy.milliwatt_hours == 77'930);
  CHECK(back.phases[2].duration.count() == 352'000);
  CHECK(back.capabilities == p.capabilities);
}
