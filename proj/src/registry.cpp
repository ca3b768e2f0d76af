#include "cloudcraft/registry.hpp"

#include <algorithm>

namespace cloudcraft::net {

ServiceRegistration DiscoveryRegistry::register_service(const std::string& name,
                                                        const std::string& instance_id,
                                                        const std::string& endpoint,
                                                        int64_t ttl_s) {
  if (ttl_s <= 0) throw std::invalid_argument("ttl must be positive");
  const int64_t now = clock_.now_ms();
  std::lock_guard lock(mu_);
  auto& instances = services_[name];
  std::erase_if(instances, [&](const ServiceRegistration& r) { return !alive(r, now); });
  for (const auto& r : instances)
    if (r.instance_id == instance_id) throw DuplicateInstance(name, instance_id);
  ServiceRegistration reg{name, instance_id, endpoint, now, now, ttl_s};
  instances.push_back(reg);
  return reg;
}

void DiscoveryRegistry::heartbeat(const std::string& name, const std::string& instance_id) {
  const int64_t now = clock_.now_ms();
  std::lock_guard lock(mu_);
  auto it = services_.find(name);
  if (it == services_.end()) throw UnknownInstance(name, instance_id);
  for (auto& r : it->second) {
    if (r.instance_id == instance_id) {
      r.last_heartbeat_ms = now;
      return;
    }
  }
  throw UnknownInstance(name, instance_id);
}

ServiceRegistration DiscoveryRegistry::resolve(const std::string& name) {
  const int64_t now = clock_.now_ms();
  std::lock_guard lock(mu_);
  auto it = services_.find(name);
  if (it == services_.end()) throw NoLiveInstance(name);
  auto& instances = it->second;
  std::erase_if(instances, [&](const ServiceRegistration& r) { return !alive(r, now); });
  if (instances.empty()) throw NoLiveInstance(name);
  const uint64_t turn = rr_counters_[name]++;
  return instances[turn % instances.size()];
}

std::vector<ServiceRegistration> DiscoveryRegistry::live_instances(const std::string& name) const {
  const int64_t now = clock_.now_ms();
  std::lock_guard lock(mu_);
  std::vector<ServiceRegistration> out;
  auto it = services_.find(name);
  if (it == services_.end()) return out;
  for (const auto& r : it->second)
    if (alive(r, now)) out.push_back(r);
  return out;
}

}  // namespace cloudcraft::net
