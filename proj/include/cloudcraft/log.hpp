#pragma once

#include <sstream>
#include <string>

namespace cloudcraft::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3 };

void set_level(Level level);
Level level();
Level parse_level(const std::string& name);

void write(Level level, const std::string& component, const std::string& message);

// Usage: CLOG(Info, "api-gateway") << "routed " << path << " corr=" << id;
class LineBuilder {
 public:
  LineBuilder(Level level, std::string component)
      : level_(level), component_(std::move(component)) {}
  ~LineBuilder() { write(level_, component_, stream_.str()); }
  template <typename T>
  LineBuilder& operator<<(const T& value) {
    stream_ << value;
    return *this;
  }

 private:
  Level level_;
  std::string component_;
  std::ostringstream stream_;
};

}  // namespace cloudcraft::log

#define CLOG(lvl, component)                                     \
  if (::cloudcraft::log::Level::lvl < ::cloudcraft::log::level()) \
    ;                                                            \
  else                                                           \
    ::cloudcraft::log::LineBuilder(::cloudcraft::log::Level::lvl, (component))
