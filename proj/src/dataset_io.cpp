// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "signforge/errors.hpp"

namespace signforge {

using nlohmann::json;

namespace {

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what(), e.byte);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->get<T>();
}

template <typename T>
T required(const json& obj, const char* key, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string(where) + ": field \"" + key + "\" has the wrong type");
  }
}

Box read_bbox(const json& obj, const char* where) {
  const auto it = obj.find("bbox");
  if (it == obj.end() || !it->is_array() || it->size() != 4)
    throw ParseError(std::string(where) + ": bbox must be [x, y, w, h]");
  for (const auto& v : *it)
    if (!v.is_number()) throw ParseError(std::string(where) + ": bbox entries must be numbers");
  return {(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>(), (*it)[3].get<double>()};
}

json sign_to_json(const PlacedSign& s, std::int64_t annotation_id, std::int64_t image_id) {
  json offsets = json::array();
  for (const auto& c : s.transform.perspective.corner_offsets) offsets.push_back({c.x, c.y});
  return {
      {"id", annotation_id},
      {"image_id", image_id},
      {"category_id", s.class_id},
      {"bbox", {s.bbox.x, s.bbox.y, s.bbox.w, s.bbox.h}},
      {"area", s.bbox.area()},
      {"iscrowd", 0},
      {"stacked", s.stacked_below_previous},
      {"transform",
       {{"gain", s.transform.gain},
        {"theta_deg", s.transform.theta_deg},
        {"scale_px", s.transform.scale_px},
        {"corner_offsets", offsets},
        {"region_mean", s.transform.region_mean}}},
  };
}

PlacedSign sign_from_json(const json& a) {
  PlacedSign s;
  s.class_id = required<int>(a, "category_id", "annotation");
  const Box b = read_bbox(a, "annotation");
  s.bbox = {int(std::lround(b.x)), int(std::lround(b.y)), int(std::lround(b.w)), int(std::lround(b.h))};
  s.stacked_below_previous = get_or<bool>(a, "stacked", false);
  if (const auto t = a.find("transform"); t != a.end()) {
    s.transform.gain = get_or<double>(*t, "gain", 1.0);
    s.transform.theta_deg = get_or<double>(*t, "theta_deg", 0.0);
    s.transform.scale_px = get_or<double>(*t, "scale_px", 0.0);
    s.transform.region_mean = get_or<double>(*t, "region_mean", 0.0);
    if (const auto o = t->find("corner_offsets"); o != t->end() && o->is_array() && o->size() == 4)
      for (std::size_t k = 0; k < 4; ++k)
        s.transform.perspective.corner_offsets[k] = {(*o)[k][0].get<double>(), (*o)[k][1].get<double>()};
  }
  return s;
}

json image_to_json(const SampleRecord& r) {
  return {
      {"id", r.image_id},         {"file_name", r.file_name}, {"width", r.width},
      {"height", r.height},       {"seed", r.seed},           {"background_id", r.background_id},
      {"gain", r.gain},           {"offset", r.offset},       {"blur_sigma", r.blur_sigma},
  };
}

SampleRecord image_from_json(const json& im) {
  SampleRecord r;
  r.image_id = required<std::int64_t>(im, "id", "image");
  r.file_name = required<std::string>(im, "file_name", "image");
  r.width = required<int>(im, "width", "image");
  r.height = required<int>(im, "height", "image");
  r.seed = get_or<std::uint64_t>(im, "seed", 0);
  r.background_id = get_or<std::string>(im, "background_id", "");
  r.gain = get_or<double>(im, "gain", 1.0);
  r.offset = get_or<double>(im, "offset", 0.0);
  r.blur_sigma = get_or<double>(im, "blur_sigma", 0.0);
  return r;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

void validate_detection(const Detection& d, std::size_t record) {
  const auto where = "prediction record " + std::to_string(record);
  if (!std::isfinite(d.confidence) || d.confidence < 0.0 || d.confidence > 1.0)
    throw ValidationError(where + ": score " + fmt::format("{}", d.confidence) + " outside [0, 1]");
  if (!std::isfinite(d.bbox.x) || !std::isfinite(d.bbox.y) || !(d.bbox.w > 0.0) || !(d.bbox.h > 0.0) ||
      !std::isfinite(d.bbox.w) || !std::isfinite(d.bbox.h))
    throw ValidationError(where + ": box size must be positive");
}

std::string format_coord(double v) {
  if (v == std::floor(v) && std::abs(v) < 9e15) return fmt::format("{}", std::int64_t(v));
  return fmt::format("{}", v);
}

}  // namespace

AnnotationDocuments write_annotations(const AnnotationSet& set) {
  json images = json::array(), annotations = json::array(), categories = json::array();
  std::int64_t next_id = 1;
  std::ostringstream csv;
  csv << "file_name,class_id,x,y,w,h\n";
  for (const auto& r : set.samples) {
    images.push_back(image_to_json(r));
    for (const auto& s : r.signs) {
      annotations.push_back(sign_to_json(s, next_id++, r.image_id));
      csv << r.file_name << ',' << s.class_id << ',' << s.bbox.x << ',' << s.bbox.y << ',' << s.bbox.w << ','
          << s.bbox.h << '\n';
    }
  }
  for (const auto& c : set.categories)
    categories.push_back({{"id", c.id}, {"name", c.name}, {"supercategory", "traffic sign"}});
  const json doc = {{"images", images}, {"annotations", annotations}, {"categories", categories}};
  return {doc.dump(1) + "\n", csv.str()};
}

AnnotationSet read_annotations(std::string_view coco_json) {
  const json doc = parse_json(coco_json, "annotation document");
  if (!doc.is_object()) throw ParseError("annotation document: top level is not an object", 0);
  AnnotationSet set;
  std::map<std::int64_t, std::size_t> by_id;
  try {
    for (const auto& im : doc.at("images")) {
      SampleRecord r = image_from_json(im);
      if (!by_id.emplace(r.image_id, set.samples.size()).second)
        throw IntegrityError("duplicate image id " + std::to_string(r.image_id));
      set.samples.push_back(std::move(r));
    }
    for (const auto& a : doc.at("annotations")) {
      const auto image_id = required<std::int64_t>(a, "image_id", "annotation");
      const auto it = by_id.find(image_id);
      if (it == by_id.end()) throw IntegrityError("annotation references unknown image_id " + std::to_string(image_id));
      set.samples[it->second].signs.push_back(sign_from_json(a));
    }
    for (const auto& c : doc.at("categories"))
      set.categories.push_back({required<int>(c, "id", "category"), required<std::string>(c, "name", "category")});
  } catch (const json::out_of_range& e) {
    throw ParseError(std::string("annotation document: ") + e.what());
  } catch (const json::type_error& e) {
    throw ParseError(std::string("annotation document: ") + e.what());
  }
  return set;
}

std::string write_sample_record(const SampleRecord& record) {
  json signs = json::array();
  std::int64_t next_id = 1;
  for (const auto& s : record.signs) signs.push_back(sign_to_json(s, next_id++, record.image_id));
  json doc = {{"image", image_to_json(record)}, {"annotations", signs}};
  return doc.dump(1) + "\n";
}

SampleRecord read_sample_record(std::string_view text) {
  const json doc = parse_json(text, "sample record");
  try {
    SampleRecord r = image_from_json(doc.at("image"));
    for (const auto& a : doc.at("annotations")) r.signs.push_back(sign_from_json(a));
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("sample record: ") + e.what());
  }
}

GroundTruthSet read_ground_truth(std::string_view coco_json) {
  const json doc = parse_json(coco_json, "ground truth");
  if (!doc.is_object()) throw ParseError("ground truth: top level is not an object", 0);
  GroundTruthSet gt;
  std::set<std::int64_t> ids;
  try {
    for (const auto& im : doc.at("images")) {
      const auto id = required<std::int64_t>(im, "id", "image");
      if (!ids.insert(id).second) throw IntegrityError("duplicate image id " + std::to_string(id));
      gt.image_ids.push_back(id);
    }
    for (const auto& a : doc.at("annotations")) {
      GroundTruthBox b;
      b.image_id = required<std::int64_t>(a, "image_id", "annotation");
      if (!ids.contains(b.image_id))
        throw IntegrityError("annotation references unknown image_id " + std::to_string(b.image_id));
      b.category_id = required<int>(a, "category_id", "annotation");
      b.bbox = read_bbox(a, "annotation");
      if (!(b.bbox.w > 0.0) || !(b.bbox.h > 0.0))
        throw ValidationError("ground-truth box on image " + std::to_string(b.image_id) + " has non-positive size");
      gt.boxes.push_back(b);
    }
  } catch (const json::out_of_range& e) {
    throw ParseError(std::string("ground truth: ") + e.what());
  } catch (const json::type_error& e) {
    throw ParseError(std::string("ground truth: ") + e.what());
  }
  return gt;
}

std::vector<Detection> read_predictions(std::string_view document) {
  std::vector<Detection> out;
  const auto first = document.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return out;

  if (document[first] == '[') {
    const json doc = parse_json(document, "predictions");
    std::size_t record = 0;
    for (const auto& r : doc) {
      const std::string where = "prediction record " + std::to_string(record);
      if (!r.is_object()) throw ParseError(where + " is not an object");
      Detection d;
      d.image_id = required<std::int64_t>(r, "image_id", where.c_str());
      d.bbox = read_bbox(r, where.c_str());
      const auto score = r.find("score");
      if (score == r.end() || !score->is_number())
        throw ParseError("prediction record " + std::to_string(record) + ": missing numeric \"score\"");
      d.confidence = score->get<double>();
      validate_detection(d, record);
      out.push_back(d);
      ++record;
    }
    return out;
  }

  std::istringstream in{std::string(document)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (out.empty() && cols[0] == "image_id") continue;
    Detection d;
    if (cols.size() != 6 || !parse_number(cols[0], d.image_id) || !parse_number(cols[1], d.bbox.x) ||
        !parse_number(cols[2], d.bbox.y) || !parse_number(cols[3], d.bbox.w) || !parse_number(cols[4], d.bbox.h) ||
        !parse_number(cols[5], d.confidence))
      throw ParseError("predictions CSV line " + std::to_string(line_no) + ": expected image_id,x,y,w,h,score");
    validate_detection(d, out.size());
    out.push_back(d);
  }
  return out;
}

std::string write_predictions_json(std::span<const Detection> detections) {
  std::string out = "[";
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const Detection& d = detections[i];
    out += fmt::format("{}\n {{\"image_id\": {}, \"bbox\": [{}, {}, {}, {}], \"score\": {:.6f}}}", i ? "," : "",
                       d.image_id, format_coord(d.bbox.x), format_coord(d.bbox.y), format_coord(d.bbox.w),
                       format_coord(d.bbox.h), d.confidence);
  }
  out += detections.empty() ? "]\n" : "\n]\n";
  return out;
}

GtsdbImport import_gtsdb_gt(std::string_view gt_txt) {
  struct Row {
    std::string file;
    Box box;
    int cls;
  };
  std::vector<Row> rows;
  std::istringstream in{std::string(gt_txt)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split(line, ';');
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0, cls = 0;
    if (cols.size() != 6 || cols[0].empty() || !parse_number(cols[1], x1) || !parse_number(cols[2], y1) ||
        !parse_number(cols[3], x2) || !parse_number(cols[4], y2) || !parse_number(cols[5], cls))
      throw ParseError("gt.txt line " + std::to_string(line_no) + ": expected file;x1;y1;x2;y2;class");
    if (x2 < x1 || y2 < y1) throw ValidationError("gt.txt line " + std::to_string(line_no) + ": inverted corners");
    rows.push_back({cols[0], Box{double(x1), double(y1), double(x2 - x1 + 1), double(y2 - y1 + 1)}, cls});
  }

  std::vector<std::string> files;
  for (const auto& r : rows)
    if (std::find(files.begin(), files.end(), r.file) == files.end()) files.push_back(r.file);
  bool numeric = !files.empty();
  std::map<std::string, std::int64_t> ids;
  for (const auto& f : files) {
    std::int64_t id = 0;
    const std::string stem = std::filesystem::path(f).stem().string();
    if (!parse_number(stem, id)) numeric = false;
    ids[f] = id;
  }
  GtsdbImport out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!numeric) ids[files[i]] = std::int64_t(i);
    out.images.push_back({ids[files[i]], files[i]});
  }
  {
    std::set<std::int64_t> unique;
    for (const auto& im : out.images)
      if (!unique.insert(im.image_id).second) throw IntegrityError("gt.txt: two files map to image id " + std::to_string(im.image_id));
  }
  for (const auto& im : out.images) out.truth.image_ids.push_back(im.image_id);
  for (const auto& r : rows) out.truth.boxes.push_back({ids[r.file], r.box, r.cls});
  return out;
}

std::string write_ground_truth_json(const GtsdbImport& imported, int width, int height) {
  json images = json::array(), annotations = json::array(), categories = json::array();
  for (const auto& im : imported.images)
    images.push_back({{"id", im.image_id}, {"file_name", im.file_name}, {"width", width}, {"height", height}});
  std::set<int> classes;
  std::int64_t next_id = 1;
  for (const auto& b : imported.truth.boxes) {
    classes.insert(b.category_id);
    annotations.push_back({{"id", next_id++},
                           {"image_id", b.image_id},
                           {"category_id", b.category_id},
                           {"bbox", {std::int64_t(b.bbox.x), std::int64_t(b.bbox.y), std::int64_t(b.bbox.w),
                                     std::int64_t(b.bbox.h)}},
                           {"area", std::int64_t(b.bbox.w * b.bbox.h)},
                           {"iscrowd", 0}});
  }
  for (int c : classes) categories.push_back({{"id", c}, {"name", "gtsdb_" + std::to_string(c)}});
  const json doc = {{"images", images}, {"annotations", annotations}, {"categories", categories}};
  return doc.dump(1) + "\n";
}

}  // namespace signforge
