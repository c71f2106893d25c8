// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "signforge/geometry.hpp"
#include "signforge/image.hpp"
#include "signforge/rng.hpp"

namespace signforge {

/// Per-corner displacement (px) of the template outline, in the order
/// top-left, top-right, bottom-right, bottom-left.
struct PerspectiveJitter {
  std::array<Point, 4> corner_offsets{};

  bool is_zero() const;
  /// Each offset drawn U(-p, p) times the matching side length.
  static PerspectiveJitter draw(Rng& rng, int width, int height, double p);
  friend bool operator==(const PerspectiveJitter&, const PerspectiveJitter&) = default;
};

std::uint8_t clamp_to_u8(double v);

/// v -> clamp(round(gain * v + offset)) on every channel.
Image adjust_brightness_contrast(const Image& img, double gain, double offset);

/// Multiplies template colour by `gain`; alpha is untouched.
Rgba scale_gain_template(const Rgba& tmpl, double gain);

/// Where a warp sends the template and how large the output canvas is.
struct WarpGeometry {
  Homography forward;             // source pixel-edge coords -> canvas coords
  std::array<Point, 4> quad;      // transformed outline corners, canvas coords
  int canvas_width = 0;
  int canvas_height = 0;
};

/// Perspective, then rotation about the template centre, then uniform scale so
/// the untransformed nominal size (max side) becomes `scale_px`. The canvas is
/// the tight integer box around the transformed outline.
WarpGeometry plan_warp(int width, int height, const PerspectiveJitter& persp, double theta_deg, double scale_px);

/// Bilinear warp of colour and alpha with the map from plan_warp. Pixels
/// outside the transformed outline have alpha 0. Requires scale_px >= 8.
Rgba warp_template(const Rgba& tmpl, const PerspectiveJitter& persp, double theta_deg, double scale_px);

/// rgb -> clamp(rgb + region_mean - constant_c).
Rgba match_region_brightness(const Rgba& tmpl, double region_mean, double constant_c);

/// Adds an independent U(-amplitude, amplitude) draw to each colour value.
/// Amplitude 0 returns the input without touching the stream.
Rgba add_jitter(const Rgba& tmpl, double amplitude, Rng& rng);

/// Euclidean distance from each pixel centre to the nearest pixel centre whose
/// alpha is 0 (the canvas exterior counts as transparent). Transparent pixels get 0.
PlaneF distance_to_transparent(const PlaneF& alpha);

/// Multiplies alpha by a linear ramp that is 0 on the transparent boundary and
/// reaches 1 at fade_frac * nominal_size pixels inward. `nominal_size`
/// defaults to the larger canvas side.
Rgba fade_borders(const Rgba& tmpl, double fade_frac, std::optional<double> nominal_size = std::nullopt);

/// In place: out = alpha * tmpl + (1 - alpha) * background, rounded. The
/// template must lie inside the background.
void composite(Image& background, const Rgba& tmpl, int x, int y);

/// Normalized, truncated Gaussian taps; radius ceil(3 * sigma). sigma = 0 gives {1}.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian, clamp-to-edge borders; sigma = 0 is the identity.
Image gaussian_blur(const Image& img, double sigma);
PlaneF gaussian_blur(const PlaneF& plane, double sigma);

/// Mean over all channels and pixels inside `box`.
double region_mean(const Image& img, const PixelBox& box);

}  // namespace signforge
