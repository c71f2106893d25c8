// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>

namespace signforge {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Integer box in raster coordinates, half-open: columns [x, x + w), rows [y, y + h).
struct PixelBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  std::int64_t area() const { return std::int64_t{w} * h; }
  bool empty() const { return w <= 0 || h <= 0; }
  bool contains(const PixelBox& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }
  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

inline std::int64_t intersection_area(const PixelBox& a, const PixelBox& b) {
  const int w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const int h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (w <= 0 || h <= 0) return 0;
  return std::int64_t{w} * h;
}

/// Continuous box in COCO [x, y, w, h] convention, absolute pixels.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  friend bool operator==(const Box&, const Box&) = default;
};

inline Box to_box(const PixelBox& b) { return {double(b.x), double(b.y), double(b.w), double(b.h)}; }

/// Row-major 3x3 projective transform acting on column vectors (x, y, 1).
class Homography {
 public:
  Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}
  explicit Homography(const std::array<double, 9>& m) : m_(m) {}

  static Homography translation(double tx, double ty) { return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1}); }
  static Homography scaling(double s) { return Homography({s, 0, 0, 0, s, 0, 0, 0, 1}); }
  /// Rotation by `degrees` about `center`; positive angles turn counter-clockwise
  /// on screen (y axis pointing down). Multiples of 90 degrees are exact.
  static Homography rotation(double degrees, Point center);

  /// Projective map taking src[k] to dst[k]. Throws GeometryError when
  /// either quad is degenerate.
  static Homography from_quads(const std::array<Point, 4>& src, const std::array<Point, 4>& dst);

  Point apply(Point p) const;
  Homography inverse() const;
  double operator()(int r, int c) const { return m_[r * 3 + c]; }
  const std::array<double, 9>& data() const { return m_; }

  friend Homography operator*(const Homography& a, const Homography& b);

 private:
  std::array<double, 9> m_;
};

/// True when the quad (in order) is strictly convex with no three collinear corners.
bool is_strictly_convex(const std::array<Point, 4>& quad);

}  // namespace signforge
