// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/geometry.hpp"

#include <cmath>
#include <numbers>

#include "signforge/errors.hpp"

namespace signforge {

namespace {

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Exact sin/cos for quarter turns so 90-degree rotations land on pixel centres.
void exact_sincos(double degrees, double& s, double& c) {
  const double turns = degrees / 90.0;
  if (turns == std::round(turns)) {
    static constexpr double kSin[] = {0, 1, 0, -1};
    static constexpr double kCos[] = {1, 0, -1, 0};
    const long q = ((long(std::round(turns)) % 4) + 4) % 4;
    s = kSin[q];
    c = kCos[q];
    return;
  }
  const double rad = degrees * std::numbers::pi / 180.0;
  s = std::sin(rad);
  c = std::cos(rad);
}

}  // namespace

Homography Homography::rotation(double degrees, Point center) {
  double s = 0, c = 1;
  exact_sincos(degrees, s, c);
  // y points down, so a counter-clockwise turn on screen is [c s; -s c].
  const Homography r({c, s, 0, -s, c, 0, 0, 0, 1});
  return translation(center.x, center.y) * r * translation(-center.x, -center.y);
}

Homography Homography::from_quads(const std::array<Point, 4>& src, const std::array<Point, 4>& dst) {
  if (!is_strictly_convex(src) || !is_strictly_convex(dst))
    throw GeometryError("homography: quad is degenerate or not convex");

  // Solve the 8x8 system for h00..h21 with h22 = 1 (Gaussian elimination, partial pivoting).
  double a[8][9] = {};
  for (int k = 0; k < 4; ++k) {
    const double x = src[k].x, y = src[k].y, u = dst[k].x, v = dst[k].y;
    double* r0 = a[2 * k];
    double* r1 = a[2 * k + 1];
    r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -u * x; r0[7] = -u * y; r0[8] = u;
    r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -v * x; r1[7] = -v * y; r1[8] = v;
  }
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12) throw GeometryError("homography: singular point configuration");
    if (pivot != col)
      for (int c = 0; c < 9; ++c) std::swap(a[pivot][c], a[col][c]);
    for (int r = 0; r < 8; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::array<double, 9> m{};
  for (int i = 0; i < 8; ++i) m[i] = a[i][8] / a[i][i];
  m[8] = 1.0;
  return Homography(m);
}

Point Homography::apply(Point p) const {
  const double w = m_[6] * p.x + m_[7] * p.y + m_[8];
  return {(m_[0] * p.x + m_[1] * p.y + m_[2]) / w, (m_[3] * p.x + m_[4] * p.y + m_[5]) / w};
}

Homography Homography::inverse() const {
  const auto& m = m_;
  const double c00 = m[4] * m[8] - m[5] * m[7];
  const double c01 = m[5] * m[6] - m[3] * m[8];
  const double c02 = m[3] * m[7] - m[4] * m[6];
  const double det = m[0] * c00 + m[1] * c01 + m[2] * c02;
  if (std::abs(det) < 1e-15) throw GeometryError("homography: not invertible");
  const double inv = 1.0 / det;
  return Homography({c00 * inv, (m[2] * m[7] - m[1] * m[8]) * inv, (m[1] * m[5] - m[2] * m[4]) * inv,
                     c01 * inv, (m[0] * m[8] - m[2] * m[6]) * inv, (m[2] * m[3] - m[0] * m[5]) * inv,
                     c02 * inv, (m[1] * m[6] - m[0] * m[7]) * inv, (m[0] * m[4] - m[1] * m[3]) * inv});
}

Homography operator*(const Homography& a, const Homography& b) {
  std::array<double, 9> m{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += a(r, k) * b(k, c);
      m[r * 3 + c] = s;
    }
  return Homography(m);
}

bool is_strictly_convex(const std::array<Point, 4>& q) {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const double z = cross(q[i], q[(i + 1) % 4], q[(i + 2) % 4]);
    if (std::abs(z) < 1e-9) return false;
    const int s = z > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

}  // namespace signforge
