#include "sway/log.hpp"

#include <cstdarg>
#include <cstdlib>
#include <cstring>

namespace sway::log {

static Level parse_env() {
    const char* env = std::getenv("SWAY_LOG");
    if (env == nullptr) return Level::warn;
    if (std::strcmp(env, "error") == 0 || std::strcmp(env, "quiet") == 0) return Level::error;
    if (std::strcmp(env, "warn") == 0) return Level::warn;
    if (std::strcmp(env, "info") == 0) return Level::info;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    return Level::warn;
}

Level threshold() {
    static const Level cached = parse_env();
    return cached;
}

bool enabled(Level level) { return static_cast<int>(level) <= static_cast<int>(threshold()); }

void write(Level level, const char* fmt, ...) {
    if (!enabled(level)) return;
    static const char* tags[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[sway %s] ", tags[static_cast<int>(level)]);
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

}  // namespace sway::log
