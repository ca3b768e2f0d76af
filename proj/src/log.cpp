#include "cloudcraft/log.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <stdexcept>

namespace cloudcraft::log {

namespace {
std::atomic<Level> g_level{Level::Info};
std::mutex g_mu;

const char* level_name(Level level) {
  switch (level) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warn: return "warn";
    case Level::Error: return "error";
  }
  return "?";
}
}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

Level parse_level(const std::string& name) {
  if (name == "debug") return Level::Debug;
  if (name == "info") return Level::Info;
  if (name == "warn") return Level::Warn;
  if (name == "error") return Level::Error;
  throw std::invalid_argument("unknown log level: " + name);
}

void write(Level level, const std::string& component, const std::string& message) {
  if (level < g_level.load()) return;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  std::lock_guard lock(g_mu);
  std::fprintf(stderr, "%lld.%03lld %-5s [%s] %s\n",
               static_cast<long long>(ms / 1000), static_cast<long long>(ms % 1000),
               level_name(level), component.c_str(), message.c_str());
}

}  // namespace cloudcraft::log
