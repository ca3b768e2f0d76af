#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>

namespace cloudcraft {

// Time source injected into everything that reads the wall clock, so
// tests and the simulator control time deterministically.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::system_clock::time_point now() const = 0;
  virtual void sleep_for(std::chrono::milliseconds d) = 0;

  int64_t now_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               now().time_since_epoch())
        .count();
  }
};

class SystemClock final : public Clock {
 public:
  std::chrono::system_clock::time_point now() const override {
    return std::chrono::system_clock::now();
  }
  void sleep_for(std::chrono::milliseconds d) override;

  static SystemClock& instance();
};

// Test clock advanced by hand. sleep_for advances time immediately.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(int64_t start_ms = 1'000'000)
      : now_(std::chrono::system_clock::time_point(std::chrono::milliseconds(start_ms))) {}

  std::chrono::system_clock::time_point now() const override {
    std::lock_guard lock(mu_);
    return now_;
  }
  void sleep_for(std::chrono::milliseconds d) override { advance(d); }
  void advance(std::chrono::milliseconds d) {
    std::lock_guard lock(mu_);
    now_ += d;
  }

 private:
  mutable std::mutex mu_;
  std::chrono::system_clock::time_point now_;
};

}  // namespace cloudcraft
