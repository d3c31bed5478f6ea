#pragma once

#include <string>

namespace jsnet {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Threshold parsed once from the JSNET_LOG environment variable
// (error|info|debug, default info). Messages above it are dropped.
LogLevel log_level();

void log_message(LogLevel level, const std::string& message);

inline void log_error(const std::string& m) { log_message(LogLevel::Error, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::Info, m); }
inline void log_debug(const std::string& m) { log_message(LogLevel::Debug, m); }

}  // namespace jsnet
