#include "cloudcraft/units.hpp"

#include <cstdio>

namespace cloudcraft {

Phase phase_from_name(const std::string& name) {
  if (name == "pre_print") return Phase::PrePrint;
  if (name == "print") return Phase::Print;
  if (name == "post_print") return Phase::PostPrint;
  throw std::invalid_argument("unknown phase: " + name);
}

std::string format_hms(std::chrono::milliseconds d) {
  int64_t total_s = d.count() / 1000;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld",
                static_cast<long long>(total_s / 3600),
                static_cast<long long>((total_s / 60) % 60),
                static_cast<long long>(total_s % 60));
  return buf;
}

}  // namespace cloudcraft
