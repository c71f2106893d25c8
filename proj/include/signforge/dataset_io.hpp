// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "signforge/geometry.hpp"
#include "signforge/synthesizer.hpp"

namespace signforge {

// All boxes are COCO [x, y, w, h] in absolute pixels.

struct SampleRecord {
  std::int64_t image_id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  std::string background_id;
  double gain = 1.0;
  double offset = 0.0;
  double blur_sigma = 0.0;
  std::vector<PlacedSign> signs;
  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct Category {
  int id = 0;
  std::string name;
  friend bool operator==(const Category&, const Category&) = default;
};

struct AnnotationSet {
  std::vector<SampleRecord> samples;
  std::vector<Category> categories;
  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

struct AnnotationDocuments {
  std::string coco_json;
  std::string csv;  // file_name,class_id,x,y,w,h
};

/// Deterministic bytes: keys sorted, integer pixel coordinates.
AnnotationDocuments write_annotations(const AnnotationSet& set);
AnnotationSet read_annotations(std::string_view coco_json);

/// One sample as a standalone JSON object (used for per-sample sidecars).
std::string write_sample_record(const SampleRecord& record);
SampleRecord read_sample_record(std::string_view json);

struct GroundTruthBox {
  std::int64_t image_id = 0;
  Box bbox;
  int category_id = 0;
  friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

struct Detection {
  std::int64_t image_id = 0;
  Box bbox;
  double confidence = 0.0;
  friend bool operator==(const Detection&, const Detection&) = default;
};

struct GroundTruthSet {
  std::vector<std::int64_t> image_ids;  // every image of the document, annotated or not
  std::vector<GroundTruthBox> boxes;
};

/// Reads the truth side of any COCO annotation document.
GroundTruthSet read_ground_truth(std::string_view coco_json);

/// COCO results array `[{"image_id", "bbox", "score"}]` or CSV
/// `image_id,x,y,w,h,score` (header optional). Order is preserved; records with
/// a score outside [0, 1] or a non-positive size raise ValidationError.
std::vector<Detection> read_predictions(std::string_view document);

/// Results array; integral coordinates are written as integers, scores with six decimals.
std::string write_predictions_json(std::span<const Detection> detections);

struct GtsdbImage {
  std::int64_t image_id = 0;
  std::string file_name;
};

struct GtsdbImport {
  std::vector<GtsdbImage> images;
  GroundTruthSet truth;
};

/// Parses GTSDB `gt.txt` lines `file;x1;y1;x2;y2;class` (inclusive corner
/// pixels) into [x, y, w, h] boxes with w = x2 - x1 + 1. When every file stem
/// is numeric the stems become image ids; otherwise ids count up from 0 in
/// order of first appearance.
GtsdbImport import_gtsdb_gt(std::string_view gt_txt);

/// COCO ground-truth document for imported GTSDB annotations.
std::string write_ground_truth_json(const GtsdbImport& imported, int width, int height);

}  // namespace signforge
