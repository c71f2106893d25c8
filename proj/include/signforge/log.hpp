// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include <spdlog/logger.h>

namespace signforge {

/// Shared stderr logger; level taken from SIGNFORGE_LOG (trace|debug|info|warn|error|off).
std::shared_ptr<spdlog::logger> logger();

}  // namespace signforge
