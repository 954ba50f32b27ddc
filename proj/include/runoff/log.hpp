#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace runoff {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Verbosity is controlled by the RESERVE_LOG environment variable
// (error|info|debug); unset or unrecognized values mean "error".
inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("RESERVE_LOG");
        if (env == nullptr) return LogLevel::Error;
        const std::string v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        return LogLevel::Error;
    }();
    return level;
}

inline void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "[info] " << msg << '\n';
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) std::cerr << "[debug] " << msg << '\n';
}

} // namespace runoff
