#include "cloudcraft/clock.hpp"

#include <thread>

namespace cloudcraft {

void SystemClock::sleep_for(std::chrono::milliseconds d) {
  std::this_thread::sleep_for(d);
}

SystemClock& SystemClock::instance() {
  static SystemClock clock;
  return clock;
}

}  // namespace cloudcraft
