#include "opinion/log.hpp"

#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace opinion::log {
namespace {

Level parse_env() {
  const char* raw = std::getenv("OPINION_LOG");
  if (raw == nullptr) return Level::info;
  const std::string v(raw);
  if (v == "error") return Level::error;
  if (v == "debug") return Level::debug;
  return Level::info;
}

spdlog::level::level_enum to_spd(Level lvl) {
  switch (lvl) {
    case Level::error: return spdlog::level::err;
    case Level::debug: return spdlog::level::debug;
    case Level::info: break;
  }
  return spdlog::level::info;
}

struct State {
  std::shared_ptr<spdlog::logger> logger;
  Level level;
};

State& state() {
  static State s = [] {
    State st;
    st.level = parse_env();
    st.logger = spdlog::stderr_color_mt("opinion");
    st.logger->set_pattern("[%l] %v");
    st.logger->set_level(to_spd(st.level));
    return st;
  }();
  return s;
}

}  // namespace

Level level() { return state().level; }

void set_level(Level lvl) {
  auto& s = state();
  s.level = lvl;
  s.logger->set_level(to_spd(lvl));
}

void error(std::string_view msg) { state().logger->error(msg); }
void info(std::string_view msg) { state().logger->info(msg); }
void debug(std::string_view msg) { state().logger->debug(msg); }

}  // namespace opinion::log
