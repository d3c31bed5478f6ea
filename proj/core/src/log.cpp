#include "jsnet/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace jsnet {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("JSNET_LOG");
        if (env == nullptr) return LogLevel::Info;
        if (std::strcmp(env, "error") == 0) return LogLevel::Error;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        return LogLevel::Info;
    }();
    return level;
}

void log_message(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    const char* tag = level == LogLevel::Error ? "error" : level == LogLevel::Info ? "info" : "debug";
    std::fprintf(stderr, "[jsnet %s] %s\n", tag, message.c_str());
}

}  // namespace jsnet
