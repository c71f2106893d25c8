// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "signforge/image.hpp"
#include "signforge/rng.hpp"

namespace signforge {

struct Template {
  int class_id = 0;
  std::string name;
  Rgba image;  // native resolution

  int nominal_size() const { return std::max(image.width(), image.height()); }
};

using KeyColor = std::array<std::uint8_t, 3>;

struct TemplateManifestEntry {
  std::filesystem::path path;
  int class_id = 0;
  std::optional<KeyColor> key_color;
};

/// Immutable class-indexed set of templates with contiguous ids 1..M.
class Catalog {
 public:
  /// Throws ConfigError on duplicate or non-contiguous ids and ValidationError
  /// on a template with no visible pixel.
  static Catalog from_templates(std::vector<Template> templates);

  int class_count() const { return int(templates_.size()); }
  bool empty() const { return templates_.empty(); }
  const Template& at(int class_id) const;
  const std::vector<Template>& templates() const { return templates_; }

  /// Uniform draw over 1..M.
  int sample_class(Rng& rng) const;

 private:
  std::vector<Template> templates_;  // index = class_id - 1
};

/// CSV rows `path,class_id[,key_color]`; an optional header row starting with
/// "path" is skipped. Relative paths resolve against `base_dir`. Key colours
/// are hex `#RRGGBB`.
std::vector<TemplateManifestEntry> parse_template_manifest(std::string_view csv,
                                                           const std::filesystem::path& base_dir);

Catalog load_catalog(std::span<const TemplateManifestEntry> manifest);
Catalog load_catalog_manifest(const std::filesystem::path& manifest_path);

/// Alpha from the file's own channel when present, otherwise from the key colour.
Rgba template_from_decoded(Image rgb, std::optional<PlaneF> alpha, const std::optional<KeyColor>& key,
                           const std::string& label);

}  // namespace signforge
