// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <unistd.h>

#include "signforge/codec.hpp"
#include "signforge/rng.hpp"

namespace signforge::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() / fmt::format("{}-{}-{}", tag, ::getpid(), counter++);
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

bool inside(Shape shape, double u, double v) {
  // u, v in [-1, 1]
  switch (shape) {
    case Shape::Disc: return u * u + v * v <= 1.0;
    case Shape::Square: return std::abs(u) <= 0.9 && std::abs(v) <= 0.9;
    case Shape::Diamond: return std::abs(u) + std::abs(v) <= 1.0;
    case Shape::Triangle: return v <= 0.85 && v >= -0.95 + 2.0 * std::abs(u) * 0.95;
    case Shape::Octagon: return std::abs(u) <= 0.95 && std::abs(v) <= 0.95 && std::abs(u) + std::abs(v) <= 1.35;
  }
  return false;
}

}  // namespace

Rgba make_sign(int class_id, int size, Shape shape) {
  Rgba out(size, size);
  const std::uint8_t r = std::uint8_t(40 + (class_id * 67) % 200);
  const std::uint8_t g = std::uint8_t(30 + (class_id * 131) % 190);
  const std::uint8_t b = std::uint8_t(50 + (class_id * 29) % 180);
  const double half = size / 2.0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double u = (x + 0.5 - half) / half, v = (y + 0.5 - half) / half;
      if (!inside(shape, u, v)) continue;
      out.alpha.at(x, y) = 1.0f;
      const bool rim = !inside(shape, u / 0.82, v / 0.82);
      const bool glyph = std::abs(u) < 0.12 && std::abs(v) < 0.4;
      out.rgb.at(x, y, 0) = rim ? 250 : glyph ? 20 : r;
      out.rgb.at(x, y, 1) = rim ? 250 : glyph ? 20 : g;
      out.rgb.at(x, y, 2) = rim ? 250 : glyph ? 20 : b;
    }
  return out;
}

Rgba make_sign(int class_id, int size) { return make_sign(class_id, size, Shape(class_id % 5)); }

Catalog make_catalog(int classes, int size) {
  std::vector<Template> ts;
  for (int c = 1; c <= classes; ++c) ts.push_back({c, fmt::format("class_{}", c), make_sign(c, size)});
  return Catalog::from_templates(std::move(ts));
}

Image make_background(std::uint64_t seed, int width, int height) {
  Image img(width, height);
  const std::uint64_t h = splitmix64(seed);
  const int base[3] = {int(h & 0x7f), int((h >> 8) & 0x7f), int((h >> 16) & 0x7f)};
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::uint64_t n = splitmix64(h ^ (std::uint64_t(y) << 32 | std::uint64_t(x)));
      for (int c = 0; c < 3; ++c)
        img.at(x, y, c) = std::uint8_t(base[c] + (x * (c + 1) + y * (3 - c)) % 97 + int((n >> (c * 8)) & 0x1f));
    }
  return img;
}

fs::path write_template_set(const fs::path& dir, int classes, int size) {
  fs::create_directories(dir);
  std::string manifest = "path,class_id\n";
  for (int c = 1; c <= classes; ++c) {
    const std::string name = fmt::format("sign_{:02}.png", c);
    write_png(dir / name, make_sign(c, size));
    manifest += fmt::format("{},{}\n", name, c);
  }
  spit(dir / "manifest.csv", manifest);
  return dir / "manifest.csv";
}

GenerationConfig small_config(std::uint64_t seed, std::uint64_t n) {
  GenerationConfig c;
  c.master_seed = seed;
  c.n_samples = n;
  c.size_range = Range{24.0, 160.0};
  c.validate();
  return c;
}

fs::path write_corpus(const fs::path& dir, const std::vector<CorpusImage>& images) {
  fs::create_directories(dir);
  std::map<std::string, int> category_ids;
  std::string imgs, anns;
  int ann_id = 1;
  for (const auto& im : images) {
    const std::string file = fmt::format("img_{:04}.jpg", im.id);
    write_jpeg(dir / file, make_background(std::uint64_t(im.id), im.width, im.height));
    imgs += fmt::format("{}{{\"id\": {}, \"file_name\": \"{}\", \"width\": {}, \"height\": {}}}",
                        imgs.empty() ? "" : ",", im.id, file, im.width, im.height);
    for (const auto& label : im.labels) {
      auto [it, fresh] = category_ids.emplace(label, int(category_ids.size()) + 1);
      (void)fresh;
      anns += fmt::format("{}{{\"id\": {}, \"image_id\": {}, \"category_id\": {}, \"bbox\": [0, 0, 10, 10]}}",
                          anns.empty() ? "" : ",", ann_id++, im.id, it->second);
    }
  }
  std::string cats;
  for (const auto& [name, id] : category_ids)
    cats += fmt::format("{}{{\"id\": {}, \"name\": \"{}\"}}", cats.empty() ? "" : ",", id, name);
  const fs::path doc = dir / "instances.json";
  spit(doc, fmt::format("{{\"images\": [{}], \"annotations\": [{}], \"categories\": [{}]}}\n", imgs, anns, cats));
  return doc;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace signforge::testing
