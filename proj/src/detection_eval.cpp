// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/detection_eval.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "signforge/errors.hpp"

namespace signforge {

double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? std::min(1.0, inter / uni) : 0.0;
}

std::vector<std::size_t> confidence_order(std::span<const Detection> detections) {
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (detections[a].confidence != detections[b].confidence)
      return detections[a].confidence > detections[b].confidence;
    return detections[a].image_id < detections[b].image_id;
  });
  return order;
}

std::size_t MatchResult::tp_count() const {
  return std::size_t(std::count(true_positive.begin(), true_positive.end(), true));
}

MatchResult match_detections(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                             double iou_threshold) {
  std::unordered_map<std::int64_t, std::vector<std::size_t>> by_image;
  for (std::size_t g = 0; g < truth.size(); ++g) by_image[truth[g].image_id].push_back(g);

  MatchResult m;
  m.gt_count = truth.size();
  m.order = confidence_order(detections);
  m.true_positive.assign(m.order.size(), false);
  m.matched_gt.assign(m.order.size(), std::nullopt);
  std::vector<bool> taken(truth.size(), false);

  for (std::size_t rank = 0; rank < m.order.size(); ++rank) {
    const Detection& d = detections[m.order[rank]];
    const auto it = by_image.find(d.image_id);
    if (it == by_image.end()) continue;
    double best = -1.0;
    std::optional<std::size_t> best_gt;
    for (std::size_t g : it->second) {
      if (taken[g]) continue;
      const double v = iou(d.bbox, truth[g].bbox);
      if (v > best) {
        best = v;
        best_gt = g;
      }
    }
    if (best_gt && best >= iou_threshold) {
      taken[*best_gt] = true;
      m.true_positive[rank] = true;
      m.matched_gt[rank] = best_gt;
    }
  }
  return m;
}

std::vector<PrPoint> precision_recall_curve(const MatchResult& match) {
  std::vector<PrPoint> curve;
  curve.reserve(match.true_positive.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < match.true_positive.size(); ++k) {
    tp += match.true_positive[k] ? 1 : 0;
    const double recall = match.gt_count ? double(tp) / double(match.gt_count) : 0.0;
    curve.push_back({recall, double(tp) / double(k + 1)});
  }
  return curve;
}

namespace {

// Sum of envelope precisions at each true positive, as a reduced fraction.
// Returns nullopt when the denominator outgrows exact double range.
std::optional<double> exact_average_precision(const MatchResult& match) {
  __extension__ typedef __int128 i128;
  constexpr i128 kLimit = i128(1) << 53;
  const std::size_t n = match.true_positive.size();
  std::vector<std::size_t> tp_at(n);
  std::size_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) tp_at[k] = tp += match.true_positive[k] ? 1 : 0;

  i128 num = 0, den = 1;
  i128 env_num = 0, env_den = 1;  // max over ranks >= k of tp/rank
  for (std::size_t k = n; k-- > 0;) {
    const i128 p_num = i128(tp_at[k]), p_den = i128(k + 1);
    if (p_num * env_den > env_num * p_den) {
      env_num = p_num;
      env_den = p_den;
    }
    if (!match.true_positive[k]) continue;
    num = num * env_den + env_num * den;
    den *= env_den;
    i128 a = num, b = den;
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    if (den >= kLimit) return std::nullopt;
  }
  den *= i128(match.gt_count);
  if (num >= kLimit || den >= kLimit) return std::nullopt;
  return double(num) / double(den);
}

}  // namespace

double average_precision(const MatchResult& match) {
  if (match.gt_count == 0) throw EvaluationError("average precision is undefined without ground truth");
  if (const auto exact = exact_average_precision(match)) return *exact;
  const auto curve = precision_recall_curve(match);
  std::vector<double> mrec{0.0}, mpre{0.0};
  for (const auto& p : curve) {
    mrec.push_back(p.recall);
    mpre.push_back(p.precision);
  }
  mrec.push_back(1.0);
  mpre.push_back(0.0);
  for (std::size_t i = mpre.size() - 1; i > 0; --i) mpre[i - 1] = std::max(mpre[i - 1], mpre[i]);
  double ap = 0.0;
  for (std::size_t i = 0; i + 1 < mrec.size(); ++i)
    if (mrec[i + 1] != mrec[i]) ap += (mrec[i + 1] - mrec[i]) * mpre[i + 1];
  return ap;
}

double mean_average_precision(std::span<const double> per_category_ap) {
  if (per_category_ap.empty()) throw EvaluationError("mAP over zero categories");
  double sum = 0.0;
  for (double ap : per_category_ap) sum += ap;
  return sum / double(per_category_ap.size());
}

namespace {

std::vector<Detection> surviving(std::span<const Detection> detections, double conf_threshold) {
  std::vector<Detection> kept;
  for (const auto& d : detections)
    if (d.confidence >= conf_threshold) kept.push_back(d);
  return kept;
}

OperatingPoint operating_point(std::size_t tp, std::size_t n, std::size_t gt) {
  OperatingPoint op;
  op.tp = tp;
  op.fp = n - tp;
  op.gt = gt;
  op.precision = n == 0 ? 1.0 : double(tp) / double(n);
  op.recall = gt == 0 ? 1.0 : double(tp) / double(gt);
  // Harmonic mean of the two ratios, reduced to a single division.
  op.f1 = n + gt == 0 ? 1.0 : 2.0 * double(tp) / double(n + gt);
  return op;
}

}  // namespace

OperatingPoint pr_f1_at(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                        double conf_threshold, double iou_threshold) {
  const auto kept = surviving(detections, conf_threshold);
  const MatchResult m = match_detections(kept, truth, iou_threshold);
  return operating_point(m.tp_count(), kept.size(), truth.size());
}

double select_threshold(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                        double iou_threshold) {
  if (detections.empty()) throw EvaluationError("threshold selection needs at least one detection");
  // Greedy matching in confidence order means the match above any cut-off is a
  // prefix of the full match, so one pass scores every candidate.
  const MatchResult m = match_detections(detections, truth, iou_threshold);
  const std::size_t g = truth.size();
  std::size_t tp = 0;
  double best_threshold = 0.0;
  OperatingPoint best;
  bool have = false;
  for (std::size_t rank = 0; rank < m.order.size(); ++rank) {
    tp += m.true_positive[rank] ? 1 : 0;
    const double conf = detections[m.order[rank]].confidence;
    if (rank + 1 < m.order.size() && detections[m.order[rank + 1]].confidence == conf) continue;
    const OperatingPoint op = operating_point(tp, rank + 1, g);
    // F1 = 2tp / (n + g); compare as fractions so ties are exact.
    bool better = !have;
    if (have) {
      better = op.tp * (best.tp + best.fp + g) > best.tp * (op.tp + op.fp + g);
    }
    if (better) {
      best = op;
      best_threshold = conf;
      have = true;
    }
  }
  return best_threshold;
}

CategoryRecall category_recall(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                               double conf_threshold, double iou_threshold) {
  const auto kept = surviving(detections, conf_threshold);
  const MatchResult m = match_detections(kept, truth, iou_threshold);
  std::vector<bool> hit(truth.size(), false);
  for (const auto& g : m.matched_gt)
    if (g) hit[*g] = true;
  CategoryRecall out;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto& entry = out[truth[i].category_id];
    ++entry.total;
    if (hit[i]) ++entry.hits;
  }
  return out;
}

void accumulate(CategoryRecall& total, const CategoryRecall& run) {
  for (const auto& [category, count] : run) {
    total[category].hits += count.hits;
    total[category].total += count.total;
  }
}

EvalReport evaluate(std::span<const Detection> detections, std::span<const GroundTruthBox> truth,
                    double conf_threshold, double iou_threshold) {
  EvalReport r;
  r.iou_threshold = iou_threshold;
  r.chosen_threshold = conf_threshold;
  r.detections = detections.size();
  r.gt_count = truth.size();

  const MatchResult all = match_detections(detections, truth, iou_threshold);
  r.ap = average_precision(all);
  const double per_category[] = {r.ap};  // class-agnostic detector: a single category
  r.map = mean_average_precision(per_category);
  r.pr_curve = precision_recall_curve(all);

  const OperatingPoint op = pr_f1_at(detections, truth, conf_threshold, iou_threshold);
  r.precision = op.precision;
  r.recall = op.recall;
  r.f1 = op.f1;
  r.tp = op.tp;
  r.fp = op.fp;
  r.per_category = category_recall(detections, truth, conf_threshold, iou_threshold);
  for (std::size_t rank = 0; rank < all.order.size(); ++rank) {
    const Detection& d = detections[all.order[rank]];
    if (d.confidence >= conf_threshold && !all.true_positive[rank]) r.false_positives.push_back(d);
  }
  return r;
}

std::string report_to_json(const EvalReport& r) {
  using nlohmann::json;
  json curve = json::array();
  for (const auto& p : r.pr_curve) curve.push_back({p.recall, p.precision});
  json categories = json::object();
  for (const auto& [id, c] : r.per_category)
    categories[std::to_string(id)] = {{"hits", c.hits}, {"total", c.total}, {"recall", c.recall()}};
  json fps = json::array();
  for (const auto& d : r.false_positives)
    fps.push_back({{"image_id", d.image_id}, {"bbox", {d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h}}, {"score", d.confidence}});
  const json doc = {
      {"iou_threshold", r.iou_threshold},
      {"ap", r.ap},
      {"map", r.map},
      {"precision", r.precision},
      {"recall", r.recall},
      {"f1", r.f1},
      {"chosen_threshold", r.chosen_threshold},
      {"threshold_source", r.threshold_source},
      {"detections", r.detections},
      {"gt_count", r.gt_count},
      {"tp", r.tp},
      {"fp", r.fp},
      {"per_category_recall", categories},
      {"pr_curve", curve},
      {"false_positives", fps},
  };
  return doc.dump(2) + "\n";
}

std::string category_recall_csv(const CategoryRecall& recall) {
  std::string out = "category_id,hits,total,recall\n";
  for (const auto& [id, c] : recall) out += fmt::format("{},{},{},{:.6f}\n", id, c.hits, c.total, c.recall());
  return out;
}

}  // namespace signforge
