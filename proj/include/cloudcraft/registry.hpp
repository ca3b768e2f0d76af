#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "cloudcraft/clock.hpp"

namespace cloudcraft::net {

struct ServiceRegistration {
  std::string service_name;
  std::string instance_id;
  std::string endpoint;
  int64_t registered_at_ms = 0;
  int64_t last_heartbeat_ms = 0;
  int64_t ttl_s = 0;
};

class DuplicateInstance : public std::runtime_error {
 public:
  DuplicateInstance(const std::string& name, const std::string& instance)
      : std::runtime_error("instance already registered: " + name + "/" + instance) {}
};

class NoLiveInstance : public std::runtime_error {
 public:
  explicit NoLiveInstance(const std::string& name)
      : std::runtime_error("no live instance of service: " + name) {}
};

class UnknownInstance : public std::runtime_error {
 public:
  UnknownInstance(const std::string& name, const std::string& instance)
      : std::runtime_error("unknown instance: " + name + "/" + instance) {}
};

// Service discovery and the round-robin picker in one structure. An
// instance is live until now - last_heartbeat > ttl; expired instances
// vanish from resolve and may re-register.
class DiscoveryRegistry {
 public:
  explicit DiscoveryRegistry(Clock& clock) : clock_(clock) {}

  ServiceRegistration register_service(const std::string& name, const std::string& instance_id,
                                       const std::string& endpoint, int64_t ttl_s);
  void heartbeat(const std::string& name, const std::string& instance_id);
  // Strict round robin across live instances, in registration order.
  ServiceRegistration resolve(const std::string& name);
  std::vector<ServiceRegistration> live_instances(const std::string& name) const;

 private:
  bool alive(const ServiceRegistration& reg, int64_t now_ms) const {
    return now_ms - reg.last_heartbeat_ms <= reg.ttl_s * 1000;
  }

  Clock& clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::vector<ServiceRegistration>> services_;
  std::map<std::string, uint64_t> rr_counters_;
};

}  // namespace cloudcraft::net
