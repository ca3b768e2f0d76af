#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cloudcraft {

// Filament mass, integer milligrams. Table-2 style gram values with up
// to three decimals stay exact.
struct Mass {
  int64_t milligrams = 0;

  static Mass from_mg(int64_t mg) { return Mass{mg}; }
  static Mass from_grams(double g) { return Mass{static_cast<int64_t>(std::llround(g * 1000.0))}; }
  double grams() const { return static_cast<double>(milligrams) / 1000.0; }

  friend bool operator==(Mass a, Mass b) { return a.milligrams == b.milligrams; }
  friend bool operator<(Mass a, Mass b) { return a.milligrams < b.milligrams; }
  friend bool operator<=(Mass a, Mass b) { return a.milligrams <= b.milligrams; }
};

// Electrical energy, integer milliwatt-hours. Two-decimal Wh readings
// stay exact.
struct Energy {
  int64_t milliwatt_hours = 0;

  static Energy from_mwh(int64_t mwh) { return Energy{mwh}; }
  static Energy from_wh(double wh) { return Energy{static_cast<int64_t>(std::llround(wh * 1000.0))}; }
  double wh() const { return static_cast<double>(milliwatt_hours) / 1000.0; }

  Energy& operator+=(Energy other) {
    milliwatt_hours += other.milliwatt_hours;
    return *this;
  }
  friend Energy operator+(Energy a, Energy b) { return Energy{a.milliwatt_hours + b.milliwatt_hours}; }
  friend bool operator==(Energy a, Energy b) { return a.milliwatt_hours == b.milliwatt_hours; }
  friend bool operator<(Energy a, Energy b) { return a.milliwatt_hours < b.milliwatt_hours; }
  friend bool operator<=(Energy a, Energy b) { return a.milliwatt_hours <= b.milliwatt_hours; }
};

enum class Phase { PrePrint, Print, PostPrint };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::PrePrint: return "pre_print";
    case Phase::Print: return "print";
    case Phase::PostPrint: return "post_print";
  }
  return "?";
}

Phase phase_from_name(const std::string& name);

// One production phase of a cycle: how long it ran and how much energy
// the printer plus controller drew while it did.
struct PhaseMetrics {
  Phase phase = Phase::PrePrint;
  std::chrono::milliseconds duration{0};
  Energy energy;

  double duration_s() const { return static_cast<double>(duration.count()) / 1000.0; }

  // Average power over the phase in watts. Exact enough that converting
  // back to energy and rounding to a milliwatt-hour recovers the stored
  // value bit for bit.
  double avg_power_w() const {
    if (duration.count() <= 0) throw std::domain_error("phase has zero duration");
    return static_cast<double>(energy.milliwatt_hours) * 3600.0 /
           static_cast<double>(duration.count());
  }
};

std::string format_hms(std::chrono::milliseconds d);

}  // namespace cloudcraft
