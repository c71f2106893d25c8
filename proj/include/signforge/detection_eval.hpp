// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signforge/dataset_io.hpp"
#include "signforge/geometry.hpp"

namespace signforge {

inline constexpr double kDefaultIouThreshold = 0.7;

double iou(const Box& a, const Box& b);

/// Detection indices sorted by confidence descending, then image id, then input position.
std::vector<std::size_t> confidence_order(std::span<const Detection> detections);

struct MatchResult {
  std::vector<std::size_t> order;                     // detection indices, ranked
  std::vector<bool> true_positive;                    // per rank
  std::vector<std::optional<std::size_t>> matched_gt; // per rank, index into the truth list
  std::size_t gt_count = 0;

  std::size_t tp_count() const;
};

/// Greedy class-agnostic matching, per image, in confidence order: a detection
/// takes the unmatched truth box of highest IoU (lowest index on ties) if that
/// IoU reaches the threshold; otherwise it is a false positive.
MatchResult match_detections(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                             double iou_threshold = kDefaultIouThreshold);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

/// Raw (recall, precision) after each ranked detection.
std::vector<PrPoint> precision_recall_curve(const MatchResult& match);

/// All-points interpolated AP: area under the monotone precision envelope.
/// Throws EvaluationError when there is no ground truth.
double average_precision(const MatchResult& match);

double mean_average_precision(std::span<const double> per_category_ap);

struct OperatingPoint {
  double precision = 1.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t gt = 0;
};

/// Metrics after discarding detections with confidence below `conf_threshold`.
/// No surviving detections gives precision 1; no truth gives recall 1.
OperatingPoint pr_f1_at(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                        double conf_threshold, double iou_threshold = kDefaultIouThreshold);

/// The distinct confidence value with the highest F1; ties go to the higher
/// threshold. Throws EvaluationError when there are no detections.
double select_threshold(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                        double iou_threshold = kDefaultIouThreshold);

struct RecallCount {
  std::size_t hits = 0;
  std::size_t total = 0;
  double recall() const { return total == 0 ? 0.0 : double(hits) / double(total); }
  friend bool operator==(const RecallCount&, const RecallCount&) = default;
};

using CategoryRecall = std::map<int, RecallCount>;

/// Per category, truth boxes recovered by a detection at or above the
/// threshold, using the same greedy one-to-one matching.
CategoryRecall category_recall(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                               double conf_threshold, double iou_threshold = kDefaultIouThreshold);

/// Adds `run` into `total` category by category (multi-run accumulation).
void accumulate(CategoryRecall& total, const CategoryRecall& run);

struct EvalReport {
  double iou_threshold = kDefaultIouThreshold;
  double ap = 0.0;
  double map = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double chosen_threshold = 0.0;
  std::string threshold_source;  // "fixed", "validation" or "default"
  std::size_t detections = 0;
  std::size_t gt_count = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  CategoryRecall per_category;
  std::vector<PrPoint> pr_curve;
  std::vector<Detection> false_positives;  // at the chosen threshold, for manual review
};

EvalReport evaluate(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                    double conf_threshold, double iou_threshold = kDefaultIouThreshold);

std::string report_to_json(const EvalReport& report);
std::string category_recall_csv(const CategoryRecall& recall);

}  // namespace signforge
