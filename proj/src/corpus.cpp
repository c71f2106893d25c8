// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/corpus.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "signforge/errors.hpp"
#include "signforge/imageops.hpp"

namespace signforge {

using nlohmann::json;

namespace {

const json& require_array(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_array())
    throw ParseError(std::string("COCO document: missing array \"") + key + "\"");
  return *it;
}

template <typename T>
T field(const json& obj, const char* key, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string(where) + ": field \"" + key + "\" has the wrong type");
  }
}

}  // namespace

const std::set<std::string>& CocoIndex::labels_of(std::int64_t image_id) const {
  static const std::set<std::string> kNone;
  const auto it = label_map.find(image_id);
  return it == label_map.end() ? kNone : it->second;
}

CocoIndex parse_coco_annotations(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("COCO document: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ParseError("COCO document: top level is not an object", 0);

  const json& images = require_array(doc, "images");
  const json& annotations = require_array(doc, "annotations");
  const json& categories = require_array(doc, "categories");

  std::map<std::int64_t, std::string> category_names;
  for (const json& c : categories)
    category_names[field<std::int64_t>(c, "id", "category")] = field<std::string>(c, "name", "category");

  CocoIndex index;
  index.images.reserve(images.size());
  for (const json& im : images) {
    CocoImage img{field<std::int64_t>(im, "id", "image"), field<std::string>(im, "file_name", "image"),
                  field<int>(im, "width", "image"), field<int>(im, "height", "image")};
    if (img.width <= 0 || img.height <= 0)
      throw IntegrityError("image " + std::to_string(img.id) + " has a non-positive size");
    if (!index.label_map.emplace(img.id, std::set<std::string>{}).second)
      throw IntegrityError("duplicate image id " + std::to_string(img.id));
    index.images.push_back(std::move(img));
  }
  for (const json& a : annotations) {
    const auto image_id = field<std::int64_t>(a, "image_id", "annotation");
    const auto category_id = field<std::int64_t>(a, "category_id", "annotation");
    const auto img = index.label_map.find(image_id);
    if (img == index.label_map.end())
      throw IntegrityError("annotation references unknown image_id " + std::to_string(image_id));
    const auto cat = category_names.find(category_id);
    if (cat == category_names.end())
      throw IntegrityError("annotation references unknown category_id " + std::to_string(category_id));
    img->second.insert(cat->second);
  }
  return index;
}

std::set<std::string> ExclusionPolicy::default_excluded_labels() {
  return {"traffic light", "bicycle", "car", "motorcycle", "bus", "truck", "fire hydrant", "stop sign", "parking meter"};
}

ExclusionPolicy ExclusionPolicy::from_json(std::string_view document) {
  ExclusionPolicy policy;
  try {
    const json doc = json::parse(document);
    for (const auto& [key, value] : doc.items()) {
      if (key == "excluded_labels") policy.excluded_labels = value.get<std::set<std::string>>();
      else if (key == "min_width") policy.min_width = value.get<int>();
      else if (key == "min_height") policy.min_height = value.get<int>();
      else throw ConfigError("exclusion policy: unknown key \"" + key + "\"");
    }
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("exclusion policy: ") + e.what(), e.byte);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("exclusion policy: ") + e.what());
  }
  return policy;
}

FilterVerdict judge_background(const CocoImage& image, const std::set<std::string>& labels,
                               const ExclusionPolicy& policy) {
  for (const auto& label : labels)
    if (policy.excluded_labels.contains(label)) return {false, "excluded_label:" + label};
  if (image.width < policy.min_width) return {false, "width_below_" + std::to_string(policy.min_width)};
  if (image.height < policy.min_height) return {false, "height_below_" + std::to_string(policy.min_height)};
  return {true, {}};
}

std::vector<std::int64_t> filter_backgrounds(const CocoIndex& index, const ExclusionPolicy& policy) {
  std::vector<std::int64_t> accepted;
  for (const auto& img : index.images)
    if (judge_background(img, index.labels_of(img.id), policy).accepted) accepted.push_back(img.id);
  return accepted;
}

Image standardize_background(const Image& raster, int target) {
  if (raster.width() < 1 || raster.height() < 1) throw std::invalid_argument("standardize_background: empty raster");
  if (target < 1) throw std::invalid_argument("standardize_background: target must be positive");

  const int w = raster.width(), h = raster.height();
  const double scale = double(target) / std::min(w, h);
  const int scaled_w = w <= h ? target : std::max(target, int(std::lround(w * scale)));
  const int scaled_h = h < w ? target : std::max(target, int(std::lround(h * scale)));
  const int off_x = (scaled_w - target) / 2;
  const int off_y = (scaled_h - target) / 2;

  if (scaled_w == w && scaled_h == h) return crop(raster, {off_x, off_y, target, target});

  // Bilinear, pixel-centre aligned, clamp-to-edge; only the cropped window is sampled.
  const double sx = double(w) / scaled_w, sy = double(h) / scaled_h;
  std::vector<int> x0(target), x1(target);
  std::vector<double> fx(target);
  for (int x = 0; x < target; ++x) {
    const double u = std::clamp((x + off_x + 0.5) * sx - 0.5, 0.0, double(w - 1));
    x0[x] = int(std::floor(u));
    x1[x] = std::min(x0[x] + 1, w - 1);
    fx[x] = u - x0[x];
  }
  Image out(target, target);
  for (int y = 0; y < target; ++y) {
    const double v = std::clamp((y + off_y + 0.5) * sy - 0.5, 0.0, double(h - 1));
    const int y0 = int(std::floor(v));
    const int y1 = std::min(y0 + 1, h - 1);
    const double fy = v - y0;
    const auto r0 = raster.row(y0);
    const auto r1 = raster.row(y1);
    auto dst = out.row(y);
    for (int x = 0; x < target; ++x)
      for (int c = 0; c < 3; ++c) {
        const double top = r0[x0[x] * 3 + c] * (1 - fx[x]) + r0[x1[x] * 3 + c] * fx[x];
        const double bottom = r1[x0[x] * 3 + c] * (1 - fx[x]) + r1[x1[x] * 3 + c] * fx[x];
        dst[x * 3 + c] = clamp_to_u8(top * (1 - fy) + bottom * fy);
      }
  }
  return out;
}

}  // namespace signforge
