#pragma once

#include <string_view>

namespace opinion::log {

enum class Level { error = 0, info = 1, debug = 2 };

// Level is read once from OPINION_LOG={error,info,debug}; default info.
Level level();
void set_level(Level lvl);

void error(std::string_view msg);
void info(std::string_view msg);
void debug(std::string_view msg);

}  // namespace opinion::log
