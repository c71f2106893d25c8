// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/imageops.hpp"

#include <algorithm>
#include <type_traits>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "signforge/errors.hpp"

namespace signforge {

namespace {

std::array<std::uint8_t, 256> photometric_lut(double gain, double offset) {
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) lut[v] = clamp_to_u8(gain * v + offset);
  return lut;
}

void apply_lut(Image& img, const std::array<std::uint8_t, 256>& lut) {
  for (auto& v : img.pixels()) v = lut[v];
}

// 1-D squared Euclidean distance transform (lower envelope of parabolas).
void edt_1d(const double* f, double* d, int n, int* v, double* z) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (f[v[k]] == kInf) {
      v[k] = q;
      continue;
    }
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = double(q) - v[k];
    d[q] = f[v[k]] == kInf ? kInf : dq * dq + f[v[k]];
  }
}

}  // namespace

std::uint8_t clamp_to_u8(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return std::uint8_t(std::lround(v));
}

bool PerspectiveJitter::is_zero() const {
  return std::all_of(corner_offsets.begin(), corner_offsets.end(),
                     [](const Point& p) { return p.x == 0.0 && p.y == 0.0; });
}

PerspectiveJitter PerspectiveJitter::draw(Rng& rng, int width, int height, double p) {
  PerspectiveJitter j;
  if (p <= 0.0) return j;
  for (auto& c : j.corner_offsets) {
    c.x = rng.uniform(-p, p) * width;
    c.y = rng.uniform(-p, p) * height;
  }
  return j;
}

Image adjust_brightness_contrast(const Image& img, double gain, double offset) {
  if (!(gain > 0.0)) throw std::invalid_argument("adjust_brightness_contrast: gain must be positive");
  Image out = img;
  apply_lut(out, photometric_lut(gain, offset));
  return out;
}

Rgba scale_gain_template(const Rgba& tmpl, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("scale_gain_template: gain must be positive");
  Rgba out = tmpl;
  apply_lut(out.rgb, photometric_lut(gain, 0.0));
  return out;
}

WarpGeometry plan_warp(int width, int height, const PerspectiveJitter& persp, double theta_deg, double scale_px) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("plan_warp: empty template");
  const std::array<Point, 4> outline{Point{0, 0}, Point{double(width), 0}, Point{double(width), double(height)},
                                     Point{0, double(height)}};
  Homography perspective;
  if (!persp.is_zero()) {
    std::array<Point, 4> moved = outline;
    for (int k = 0; k < 4; ++k) {
      moved[k].x += persp.corner_offsets[k].x;
      moved[k].y += persp.corner_offsets[k].y;
    }
    perspective = Homography::from_quads(outline, moved);
  }
  const double nominal = std::max(width, height);
  const Homography rotate = Homography::rotation(theta_deg, {width / 2.0, height / 2.0});
  Homography h = Homography::scaling(scale_px / nominal) * rotate * perspective;

  std::array<Point, 4> quad{};
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (int k = 0; k < 4; ++k) {
    quad[k] = h.apply(outline[k]);
    min_x = std::min(min_x, quad[k].x);
    min_y = std::min(min_y, quad[k].y);
    max_x = std::max(max_x, quad[k].x);
    max_y = std::max(max_y, quad[k].y);
  }
  WarpGeometry g;
  g.forward = Homography::translation(-min_x, -min_y) * h;
  for (int k = 0; k < 4; ++k) g.quad[k] = {quad[k].x - min_x, quad[k].y - min_y};
  // Absorb float noise so an exact 64.0 extent stays 64 pixels wide.
  constexpr double kSlack = 1e-7;
  g.canvas_width = std::max(1, int(std::ceil(max_x - min_x - kSlack)));
  g.canvas_height = std::max(1, int(std::ceil(max_y - min_y - kSlack)));
  return g;
}

Rgba warp_template(const Rgba& tmpl, const PerspectiveJitter& persp, double theta_deg, double scale_px) {
  if (scale_px < 8.0) throw std::invalid_argument("warp_template: scale_px must be at least 8");
  const WarpGeometry g = plan_warp(tmpl.width(), tmpl.height(), persp, theta_deg, scale_px);
  const Homography inv = g.forward.inverse();
  const int sw = tmpl.width(), sh = tmpl.height();
  Rgba out(g.canvas_width, g.canvas_height);

  constexpr double kSnap = 1e-9;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const Point s = inv.apply({x + 0.5, y + 0.5});
      // Pixel centres mapping outside the template outline stay transparent.
      if (s.x < -kSnap || s.y < -kSnap || s.x > sw + kSnap || s.y > sh + kSnap) continue;
      double u = s.x - 0.5, v = s.y - 0.5;
      double x0 = std::floor(u), y0 = std::floor(v);
      double fx = u - x0, fy = v - y0;
      if (fx < kSnap) fx = 0;
      if (fx > 1 - kSnap) { fx = 0; x0 += 1; }
      if (fy < kSnap) fy = 0;
      if (fy > 1 - kSnap) { fy = 0; y0 += 1; }
      if (x0 < -1 || y0 < -1 || x0 >= sw || y0 >= sh) continue;

      const int ix = int(x0), iy = int(y0);
      const double wts[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
      const int tx[4] = {ix, ix + 1, ix, ix + 1};
      const int ty[4] = {iy, iy, iy + 1, iy + 1};
      double a = 0, inside = 0;
      double premul[3] = {0, 0, 0}, plain[3] = {0, 0, 0};
      for (int k = 0; k < 4; ++k) {
        if (wts[k] == 0.0 || tx[k] < 0 || ty[k] < 0 || tx[k] >= sw || ty[k] >= sh) continue;
        const double ta = tmpl.alpha.at(tx[k], ty[k]);
        a += wts[k] * ta;
        inside += wts[k];
        for (int c = 0; c < 3; ++c) {
          const double tc = tmpl.rgb.at(tx[k], ty[k], c);
          premul[c] += wts[k] * ta * tc;
          plain[c] += wts[k] * tc;
        }
      }
      if (inside == 0.0) continue;
      out.alpha.at(x, y) = float(std::min(a, 1.0));
      for (int c = 0; c < 3; ++c)
        out.rgb.at(x, y, c) = clamp_to_u8(a > 1e-12 ? premul[c] / a : plain[c] / inside);
    }
  }
  return out;
}

Rgba match_region_brightness(const Rgba& tmpl, double region_mean, double constant_c) {
  if (!(region_mean >= 0.0 && region_mean <= 255.0))
    throw std::invalid_argument("match_region_brightness: region mean outside [0, 255]");
  Rgba out = tmpl;
  const double shift = region_mean - constant_c;
  for (auto& v : out.rgb.pixels()) v = clamp_to_u8(v + shift);
  return out;
}

Rgba add_jitter(const Rgba& tmpl, double amplitude, Rng& rng) {
  if (amplitude < 0.0) throw std::invalid_argument("add_jitter: negative amplitude");
  Rgba out = tmpl;
  if (amplitude == 0.0) return out;
  for (auto& v : out.rgb.pixels()) v = clamp_to_u8(v + rng.uniform(-amplitude, amplitude));
  return out;
}

PlaneF distance_to_transparent(const PlaneF& alpha) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Pad by one transparent pixel on every side so the canvas exterior counts.
  const int w = alpha.width + 2, h = alpha.height + 2;
  std::vector<double> grid(std::size_t(w) * h, 0.0);
  for (int y = 0; y < alpha.height; ++y)
    for (int x = 0; x < alpha.width; ++x)
      grid[std::size_t(y + 1) * w + x + 1] = alpha.at(x, y) > 0.0f ? kInf : 0.0;

  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = grid[std::size_t(y) * w + x];
    edt_1d(f.data(), d.data(), h, v.data(), z.data());
    for (int y = 0; y < h; ++y) grid[std::size_t(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; ++y) {
    double* row = grid.data() + std::size_t(y) * w;
    std::copy(row, row + w, f.begin());
    edt_1d(f.data(), d.data(), w, v.data(), z.data());
    std::copy(d.begin(), d.begin() + w, row);
  }

  PlaneF out(alpha.width, alpha.height);
  for (int y = 0; y < alpha.height; ++y)
    for (int x = 0; x < alpha.width; ++x) out.at(x, y) = float(std::sqrt(grid[std::size_t(y + 1) * w + x + 1]));
  return out;
}

Rgba fade_borders(const Rgba& tmpl, double fade_frac, std::optional<double> nominal_size) {
  if (!(fade_frac >= 0.0 && fade_frac < 0.5)) throw std::invalid_argument("fade_borders: fade_frac outside [0, 0.5)");
  Rgba out = tmpl;
  const double band = fade_frac * nominal_size.value_or(std::max(tmpl.width(), tmpl.height()));
  if (band <= 0.0) return out;
  const PlaneF dist = distance_to_transparent(tmpl.alpha);
  for (std::size_t i = 0; i < out.alpha.data.size(); ++i) {
    const double ramp = std::min(1.0, double(dist.data[i]) / band);
    out.alpha.data[i] = float(out.alpha.data[i] * ramp);
  }
  return out;
}

void composite(Image& background, const Rgba& tmpl, int x, int y) {
  const PixelBox box{x, y, tmpl.width(), tmpl.height()};
  if (!background.bounds().contains(box)) throw std::out_of_range("composite: template exceeds background");
  for (int ty = 0; ty < tmpl.height(); ++ty) {
    auto row = background.row(y + ty);
    for (int tx = 0; tx < tmpl.width(); ++tx) {
      const double a = tmpl.alpha.at(tx, ty);
      if (a <= 0.0) continue;
      std::uint8_t* px = &row[std::size_t(x + tx) * 3];
      for (int c = 0; c < 3; ++c) px[c] = clamp_to_u8(a * tmpl.rgb.at(tx, ty, c) + (1.0 - a) * px[c]);
    }
  }
}

std::vector<double> gaussian_kernel(double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("gaussian_kernel: negative sigma");
  if (sigma == 0.0) return {1.0};
  const int radius = int(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
    sum += k[i + radius];
  }
  for (auto& v : k) v /= sum;
  return k;
}

namespace {

// Separable blur over `channels` interleaved planes, clamp-to-edge. Reads
// and writes either bytes or floats; the intermediate is float.
template <typename In, typename Out>
void blur_interleaved(const In* src, Out* dst, int w, int h, int channels, double sigma) {
  const std::vector<double> kd = gaussian_kernel(sigma);
  const std::vector<float> k(kd.begin(), kd.end());
  const int r = int(k.size() / 2);
  const std::size_t stride = std::size_t(w) * channels;

  std::vector<float> tmp(std::size_t(h) * stride);
  std::vector<float> padded((std::size_t(w) + 2 * r) * channels);
  for (int y = 0; y < h; ++y) {
    const In* in = src + y * stride;
    for (int i = 0; i < r; ++i)
      for (int c = 0; c < channels; ++c) {
        padded[std::size_t(i) * channels + c] = float(in[c]);
        padded[(std::size_t(w) + r + i) * channels + c] = float(in[(w - 1) * channels + c]);
      }
    std::copy(in, in + stride, padded.begin() + std::size_t(r) * channels);
    float* out = tmp.data() + y * stride;
    const float* mid = padded.data() + std::size_t(r) * channels;
    for (std::size_t j = 0; j < stride; ++j) out[j] = k[r] * mid[j];
    // Symmetric taps share one multiply.
    for (int t = 1; t <= r; ++t) {
      const float kt = k[r + t];
      const float* lo = mid - std::size_t(t) * channels;
      const float* hi = mid + std::size_t(t) * channels;
      for (std::size_t j = 0; j < stride; ++j) out[j] += kt * (lo[j] + hi[j]);
    }
  }

  std::vector<float> acc(stride);
  for (int y = 0; y < h; ++y) {
    const float* mid = tmp.data() + y * stride;
    for (std::size_t j = 0; j < stride; ++j) acc[j] = k[r] * mid[j];
    for (int t = 1; t <= r; ++t) {
      const float kt = k[r + t];
      const float* lo = tmp.data() + std::clamp(y - t, 0, h - 1) * stride;
      const float* hi = tmp.data() + std::clamp(y + t, 0, h - 1) * stride;
      for (std::size_t j = 0; j < stride; ++j) acc[j] += kt * (lo[j] + hi[j]);
    }
    Out* out = dst + y * stride;
    if constexpr (std::is_same_v<Out, std::uint8_t>) {
      for (std::size_t j = 0; j < stride; ++j) out[j] = std::uint8_t(std::clamp(acc[j], 0.0f, 255.0f) + 0.5f);
    } else {
      std::copy(acc.begin(), acc.end(), out);
    }
  }
}

}  // namespace

Image gaussian_blur(const Image& img, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("gaussian_blur: negative sigma");
  if (sigma == 0.0 || img.empty()) return img;
  Image out(img.width(), img.height());
  blur_interleaved(img.pixels().data(), out.pixels().data(), img.width(), img.height(), Image::kChannels, sigma);
  return out;
}

PlaneF gaussian_blur(const PlaneF& plane, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("gaussian_blur: negative sigma");
  if (sigma == 0.0 || plane.data.empty()) return plane;
  PlaneF out(plane.width, plane.height);
  blur_interleaved(plane.data.data(), out.data.data(), plane.width, plane.height, 1, sigma);
  return out;
}

double region_mean(const Image& img, const PixelBox& box) {
  if (box.empty()) throw std::invalid_argument("region_mean: empty box");
  if (!img.bounds().contains(box)) throw std::out_of_range("region_mean: box outside image");
  std::uint64_t sum = 0;
  for (int y = box.y; y < box.bottom(); ++y) {
    const auto row = img.row(y);
    for (int i = box.x * 3; i < box.right() * 3; ++i) sum += row[i];
  }
  return double(sum) / (double(box.area()) * 3.0);
}

}  // namespace signforge
