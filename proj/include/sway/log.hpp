#pragma once

#include <cstdio>

namespace sway::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

/// Verbosity read once from the SWAY_LOG environment variable
/// ("error", "warn", "info", "debug"); defaults to warn.
Level threshold();

bool enabled(Level level);

void write(Level level, const char* fmt, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 2, 3)))
#endif
    ;

}  // namespace sway::log

#define SWAY_LOG_ERROR(...) ::sway::log::write(::sway::log::Level::error, __VA_ARGS__)
#define SWAY_LOG_WARN(...) ::sway::log::write(::sway::log::Level::warn, __VA_ARGS__)
#define SWAY_LOG_INFO(...) ::sway::log::write(::sway::log::Level::info, __VA_ARGS__)
#define SWAY_LOG_DEBUG(...) ::sway::log::write(::sway::log::Level::debug, __VA_ARGS__)
