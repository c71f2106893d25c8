// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/image.hpp"

#include <algorithm>
#include <cstring>

namespace signforge {

PixelBox opaque_bounds(const PlaneF& alpha) {
  int x0 = alpha.width, y0 = alpha.height, x1 = -1, y1 = -1;
  for (int y = 0; y < alpha.height; ++y) {
    const float* row = alpha.data.data() + std::size_t(y) * alpha.width;
    for (int x = 0; x < alpha.width; ++x) {
      if (row[x] > 0.0f) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
  }
  if (x1 < 0) return {};
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

Image crop(const Image& src, const PixelBox& box) {
  if (!src.bounds().contains(box)) throw std::out_of_range("crop: box outside image");
  Image out(box.w, box.h);
  for (int y = 0; y < box.h; ++y) {
    const auto in = src.row(box.y + y).subspan(std::size_t(box.x) * Image::kChannels,
                                               std::size_t(box.w) * Image::kChannels);
    std::copy(in.begin(), in.end(), out.row(y).begin());
  }
  return out;
}

Rgba crop(const Rgba& src, const PixelBox& box) {
  PlaneF alpha(box.w, box.h);
  for (int y = 0; y < box.h; ++y)
    std::memcpy(&alpha.at(0, y), src.alpha.data.data() + std::size_t(box.y + y) * src.width() + box.x,
                sizeof(float) * box.w);
  return Rgba(crop(src.rgb, box), std::move(alpha));
}

}  // namespace signforge
