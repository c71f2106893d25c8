// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "signforge/geometry.hpp"

namespace signforge {

/// 8-bit, 3-channel, interleaved RGB raster.
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  Image(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height), pixels_(checked_size(width, height), fill) {}
  Image(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_size(width, height)) throw std::invalid_argument("Image: pixel buffer size mismatch");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  PixelBox bounds() const { return {0, 0, width_, height_}; }

  std::uint8_t& at(int x, int y, int c) { return pixels_[index(x, y) + c]; }
  std::uint8_t at(int x, int y, int c) const { return pixels_[index(x, y) + c]; }

  std::span<std::uint8_t> row(int y) { return {pixels_.data() + index(0, y), std::size_t(width_) * kChannels}; }
  std::span<const std::uint8_t> row(int y) const {
    return {pixels_.data() + index(0, y), std::size_t(width_) * kChannels};
  }

  std::vector<std::uint8_t>& pixels() { return pixels_; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  static std::size_t checked_size(int w, int h) {
    if (w < 0 || h < 0) throw std::invalid_argument("Image: negative dimensions");
    return std::size_t(w) * std::size_t(h) * kChannels;
  }
  std::size_t index(int x, int y) const { return (std::size_t(y) * width_ + x) * kChannels; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Single-channel float raster (alpha masks, blur working planes).
struct PlaneF {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  PlaneF() = default;
  PlaneF(int w, int h, float fill = 0.0f) : width(w), height(h), data(std::size_t(w) * h, fill) {}

  float& at(int x, int y) { return data[std::size_t(y) * width + x]; }
  float at(int x, int y) const { return data[std::size_t(y) * width + x]; }

  friend bool operator==(const PlaneF&, const PlaneF&) = default;
};

/// RGB raster plus per-pixel opacity in [0, 1] of identical dimensions.
struct Rgba {
  Image rgb;
  PlaneF alpha;

  Rgba() = default;
  Rgba(int w, int h) : rgb(w, h), alpha(w, h) {}
  Rgba(Image color, PlaneF opacity) : rgb(std::move(color)), alpha(std::move(opacity)) {
    if (rgb.width() != alpha.width || rgb.height() != alpha.height)
      throw std::invalid_argument("Rgba: alpha and rgb dimensions differ");
  }

  int width() const { return rgb.width(); }
  int height() const { return rgb.height(); }

  friend bool operator==(const Rgba&, const Rgba&) = default;
};

/// Tight box around pixels with alpha > 0; empty box when fully transparent.
PixelBox opaque_bounds(const PlaneF& alpha);

/// Copies the sub-rectangle `box` (must lie inside the source).
Rgba crop(const Rgba& src, const PixelBox& box);
Image crop(const Image& src, const PixelBox& box);

}  // namespace signforge
