#pragma once

#include <chrono>

#include "cloudcraft/domain.hpp"

namespace cloudcraft::testutil {

// The three testbed printers, stated from the published per-phase
// measurements. Durations are H:MM:SS converted to seconds; the energy
// figures are per-phase watt-hours (printer plus controller combined).
inline PrinterProfile ultimaker2plus() {
  PrinterProfile p;
  p.printer_id = "ultimaker2plus";
  p.model_name = "Ultimaker 2+ CONNECT";
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

inline PrinterProfile k1max() {
  PrinterProfile p;
  p.printer_id = "k1max";
  p.model_name = "Creality K1 MAX";
  p.filament = FilamentSpec{Mass::from_mg(1'000'000), Money::parse("23.14"), "PLA"};
  p.unit_filament_mass = Mass::from_mg(2'835);
  p.phases = {PhaseMetrics{Phase::PrePrint, std::chrono::milliseconds(254'000),
                           Energy::from_mwh(14'180)},
              PhaseMetrics{Phase::Print, std::chrono::milliseconds(546'000),
                           Energy::from_mwh(22'060)},
              PhaseMetrics{Phase::PostPrint, std::chrono::milliseconds(10'000),
                           Energy::from_mwh(100)}};
  p.capabilities = {"PLA"};
  p.location = GeoPoint{47.0707, 15.4395};
  return p;
}

inline PrinterProfile mk4() {
  PrinterProfile p;
  p.printer_id = "mk4";
  p.model_name = "Prusa MK4";
  p.filament = FilamentSpec{Mass::from_mg(1'000'000), Money::parse("29.99"), "PLA"};
  p.unit_filament_mass = Mass::from_mg(2'850);
  p.phases = {PhaseMetrics{Phase::PrePrint, std::chrono::milliseconds(287'000),
                           Energy::from_mwh(15'730)},
              PhaseMetrics{Phase::Print, std::chrono::milliseconds(640'000),
                           Energy::from_mwh(34'290)},
              PhaseMetrics{Phase::PostPrint, std::chrono::milliseconds(46'000),
                           Energy::from_mwh(1'020)}};
  p.capabilities = {"PLA"};
  p.location = GeoPoint{48.3069, 14.2858};
  return p;
}

inline CadModel ring_model() {
  CadModel m;
  m.model_id = "ring";
  m.designer_id = "designer-1";
  m.display_name = "Test Ring";
  m.payload_digest = "sha256:4f6a1f";
  m.required_material = "PLA";
  m.unit_filament_mass = Mass::from_mg(2'900);
  return m;
}

}  // namespace cloudcraft::testutil
