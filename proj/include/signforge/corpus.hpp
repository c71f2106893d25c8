// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "signforge/image.hpp"

namespace signforge {

struct CocoImage {
  std::int64_t id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
};

/// Images of a COCO annotation document and the category names present on each.
struct CocoIndex {
  std::vector<CocoImage> images;
  std::map<std::int64_t, std::set<std::string>> label_map;

  const std::set<std::string>& labels_of(std::int64_t image_id) const;
};

/// Parses the images/annotations/categories arrays. Throws ParseError (with byte
/// offset) on malformed JSON and IntegrityError on dangling ids.
CocoIndex parse_coco_annotations(std::string_view document);

struct ExclusionPolicy {
  std::set<std::string> excluded_labels = default_excluded_labels();
  int min_width = 400;
  int min_height = 600;

  /// Traffic-related COCO categories.
  static std::set<std::string> default_excluded_labels();
  /// Reads {"excluded_labels": [...], "min_width": n, "min_height": n}; missing keys keep defaults.
  static ExclusionPolicy from_json(std::string_view document);
};

struct FilterVerdict {
  bool accepted = false;
  std::string reason;  // empty when accepted
};

FilterVerdict judge_background(const CocoImage& image, const std::set<std::string>& labels,
                               const ExclusionPolicy& policy);

/// Ids of accepted images, in index order.
std::vector<std::int64_t> filter_backgrounds(const CocoIndex& index, const ExclusionPolicy& policy);

inline constexpr int kBackgroundSize = 1500;

/// Bilinear rescale so the shorter side equals `target`, then a central
/// target x target crop. Odd leftovers go to the trailing side.
Image standardize_background(const Image& raster, int target = kBackgroundSize);

struct BackgroundRecord {
  std::string source_id;
  Image raster;
};

}  // namespace signforge
