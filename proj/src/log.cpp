#include "rrae/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace rrae::log {

static Level parse_env() {
    const char* env = std::getenv("RRAE_LOG");
    if (!env) return Level::warn;
    if (std::strcmp(env, "error") == 0) return Level::error;
    if (std::strcmp(env, "warn") == 0) return Level::warn;
    if (std::strcmp(env, "info") == 0) return Level::info;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    return Level::warn;
}

Level level() {
    static Level lvl = parse_env();
    return lvl;
}

void emit(Level lvl, const std::string& msg) {
    if (lvl > level()) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[rrae:%s] %s\n", names[static_cast<int>(lvl)], msg.c_str());
}

} // namespace rrae::log
