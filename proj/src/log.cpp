// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/log.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace signforge {

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> instance;
  std::call_once(once, [] {
    instance = spdlog::stderr_color_mt("signforge");
    instance->set_pattern("[%H:%M:%S] [%^%l%$] %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("SIGNFORGE_LOG")) level = spdlog::level::from_str(env);
    instance->set_level(level);
  });
  return instance;
}

}  // namespace signforge
