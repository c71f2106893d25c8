// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace signforge {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Range&, const Range&) = default;
};

/// Every knob of the sample generator. Defaults are the standard blending
/// recipe; `size_range` is the operating range of the target camera
/// and has no default.
struct GenerationConfig {
  std::string preset = "default";
  std::string run_id = "synth";
  std::uint64_t n_samples = 1000;
  std::uint64_t master_seed = 0;

  Range gain_range{0.75, 1.25};
  Range offset_range{-120.0, 120.0};
  std::vector<int> count_support{1, 2, 3, 4, 5};
  double stack_p1 = 0.40;
  double stack_p2 = 0.50;
  Range rotation_range{-10.0, 10.0};
  std::optional<Range> size_range;

  double perspective_p = 0.1;
  double jitter_amplitude = 8.0;
  double fade_frac = 0.08;
  double brightness_constant = 128.0;

  /// sigma ~ U(0, blur_max_coeff * scale_rel) unless blur_sigma_range is set,
  /// in which case sigma ~ U(blur_sigma_range).
  double blur_max_coeff = 7.0;
  std::optional<Range> blur_sigma_range;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;

  /// Preset "baseline": lighter photometric augmentation used for detectors
  /// trained on real imagery (offset U(-40, 40), blur sigma U(0, 2)).
  static GenerationConfig preset_named(std::string_view name);

  /// Parses a JSON document. "preset" is applied first, remaining keys override
  /// it; unknown keys and type mismatches raise ConfigError. The result is validated.
  static GenerationConfig from_json(std::string_view document);
  /// Canonical JSON (sorted keys, every field present).
  std::string to_json() const;
};

}  // namespace signforge
