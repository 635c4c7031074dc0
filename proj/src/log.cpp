#include "dmf/log.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>

namespace dmf {
namespace {

LogLevel parse_env() {
  const char* v = std::getenv("DMF_LOG");
  if (v == nullptr || std::strcmp(v, "off") == 0 || *v == '\0') return LogLevel::Off;
  if (std::strcmp(v, "info") == 0) return LogLevel::Info;
  if (std::strcmp(v, "debug") == 0) return LogLevel::Debug;
  std::cerr << "dmf: unknown DMF_LOG value '" << v << "', using off\n";
  return LogLevel::Off;
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_env();
  return level;
}

bool log_enabled(LogLevel level) {
  return static_cast<int>(log_level()) >= static_cast<int>(level);
}

void log_info(const std::string& msg) {
  if (log_enabled(LogLevel::Info)) std::cerr << "dmf: " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_enabled(LogLevel::Debug)) std::cerr << "dmf: " << msg << "\n";
}

}  // namespace dmf
