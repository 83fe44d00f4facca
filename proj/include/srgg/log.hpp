#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace srgg {

// Log level from the SRGG_LOG environment variable:
// error < warn (default) < info < debug.
inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("SRGG_LOG");
    if (!env) return 1;
    if (std::strcmp(env, "error") == 0) return 0;
    if (std::strcmp(env, "info") == 0) return 2;
    if (std::strcmp(env, "debug") == 0) return 3;
    return 1;
  }();
  return level;
}

inline void log_error(const std::string& msg) {
  std::fprintf(stderr, "[srgg error] %s\n", msg.c_str());
}

inline void log_warn(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[srgg warn] %s\n", msg.c_str());
}

inline void log_info(const std::string& msg) {
  if (log_level() >= 2) std::fprintf(stderr, "[srgg info] %s\n", msg.c_str());
}

}  // namespace srgg
