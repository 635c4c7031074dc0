#pragma once

#include <string>

namespace dmf {

/// Diagnostics level, parsed once from the DMF_LOG environment variable
/// (off | info | debug, default off). All output goes to stderr.
enum class LogLevel { Off = 0, Info = 1, Debug = 2 };

LogLevel log_level();
bool log_enabled(LogLevel level);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace dmf
