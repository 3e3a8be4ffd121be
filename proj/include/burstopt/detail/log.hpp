#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace burstopt::detail {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3 };

/// Level comes from BURSTOPT_LOG (debug|info|warn|error), default warn.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("BURSTOPT_LOG");
    if (!env) return LogLevel::kWarn;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
    if (std::strcmp(env, "error") == 0) return LogLevel::kError;
    return LogLevel::kWarn;
  }();
  return level;
}

inline void log_at(LogLevel level, const char* tag, const std::string& message) {
  if (level < log_level()) return;
  std::fprintf(stderr, "[burstopt][%s] %s\n", tag, message.c_str());
}

inline void log_debug(const std::string& m) { log_at(LogLevel::kDebug, "debug", m); }
inline void log_info(const std::string& m) { log_at(LogLevel::kInfo, "info", m); }
inline void log_warn(const std::string& m) { log_at(LogLevel::kWarn, "warn", m); }
inline void log_error(const std::string& m) { log_at(LogLevel::kError, "error", m); }

}  // namespace burstopt::detail
