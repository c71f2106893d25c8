// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>

#include "signforge/image.hpp"

namespace signforge {

/// Decoded file, before any transparency policy is applied.
struct DecodedImage {
  Image rgb;
  std::optional<PlaneF> alpha;  // present only when the file carries an alpha channel
};

/// Reads PNG/JPEG/PPM. Grayscale and paletted files are promoted to RGB.
/// Throws IoError when the file cannot be read or decoded.
DecodedImage read_image(const std::filesystem::path& path);
Image read_rgb(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. Output bytes are a pure function of the pixels.
void write_png(const std::filesystem::path& path, const Image& img, int compression = 3);

/// Huffman-only PNG at level 1. Used for generated samples.
void write_png_fast(const std::filesystem::path& path, const Image& img);
/// Writes an RGBA PNG with alpha quantized to 8 bits.
void write_png(const std::filesystem::path& path, const Rgba& img, int compression = 3);
void write_jpeg(const std::filesystem::path& path, const Image& img, int quality = 92);

}  // namespace signforge
