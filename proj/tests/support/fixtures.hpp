// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "signforge/generation_config.hpp"
#include "signforge/image.hpp"
#include "signforge/template_catalog.hpp"

namespace signforge::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "sf");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

enum class Shape { Disc, Triangle, Diamond, Square, Octagon };

/// Procedural sign: coloured shape with a white rim on a transparent canvas.
Rgba make_sign(int class_id, int size, Shape shape);
Rgba make_sign(int class_id, int size = 64);

Catalog make_catalog(int classes, int size = 64);

/// Smooth colour gradient plus hashed texture; deterministic in `seed`.
Image make_background(std::uint64_t seed, int width = 1500, int height = 1500);

/// Template PNGs plus manifest.csv; returns the manifest path.
std::filesystem::path write_template_set(const std::filesystem::path& dir, int classes, int size = 64);

GenerationConfig small_config(std::uint64_t seed = 7, std::uint64_t n = 10);

struct CorpusImage {
  std::int64_t id;
  int width;
  int height;
  std::vector<std::string> labels;
};

/// Writes one image per entry and a COCO instances document; returns its path.
std::filesystem::path write_corpus(const std::filesystem::path& dir, const std::vector<CorpusImage>& images);

std::string slurp(const std::filesystem::path& path);
void spit(const std::filesystem::path& path, const std::string& text);

}  // namespace signforge::testing
