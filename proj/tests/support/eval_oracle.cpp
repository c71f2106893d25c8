// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "eval_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "signforge/detection_eval.hpp"
#include "signforge/rng.hpp"

namespace signforge::testing::oracle {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

Rational operator+(Rational a, Rational b) {
  const std::int64_t l = std::lcm(a.den, b.den);
  return Rational(a.num * (l / a.den) + b.num * (l / b.den), l);
}

Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }

bool operator<(Rational a, Rational b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

Rational iou(const IBox& a, const IBox& b) {
  const int iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const int ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0 || ih <= 0) return Rational(0);
  const std::int64_t inter = std::int64_t(iw) * ih;
  return Rational(inter, std::int64_t(a.w) * a.h + std::int64_t(b.w) * b.h - inter);
}

Match match(const std::vector<Det>& dets, const std::vector<Gt>& gts, Rational threshold) {
  Match m;
  m.order.resize(dets.size());
  std::iota(m.order.begin(), m.order.end(), std::size_t{0});
  std::sort(m.order.begin(), m.order.end(), [&](std::size_t a, std::size_t b) {
    return std::make_tuple(-dets[a].conf_milli, dets[a].image, a) < std::make_tuple(-dets[b].conf_milli, dets[b].image, b);
  });
  std::vector<bool> used(gts.size(), false);
  for (std::size_t idx : m.order) {
    std::optional<std::size_t> best;
    Rational best_iou(-1);
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || gts[g].image != dets[idx].image) continue;
      const Rational v = iou(dets[idx].box, gts[g].box);
      if (best_iou < v) {
        best_iou = v;
        best = g;
      }
    }
    const bool hit = best && !(best_iou < threshold);
    if (hit) used[*best] = true;
    m.tp.push_back(hit);
    m.gt_of.push_back(hit ? best : std::nullopt);
  }
  return m;
}

Rational average_precision(const Match& m, std::size_t gt_count) {
  if (gt_count == 0) throw std::domain_error("no ground truth");
  std::vector<std::size_t> tp_after;
  std::size_t tp = 0;
  for (bool f : m.tp) tp_after.push_back(tp += f ? 1 : 0);
  Rational sum(0);
  for (std::size_t k = 1; k <= gt_count; ++k) {
    Rational best(0);
    for (std::size_t r = 0; r < tp_after.size(); ++r)
      if (tp_after[r] >= k) best = std::max(best, Rational(std::int64_t(tp_after[r]), std::int64_t(r + 1)));
    sum = sum + best;
  }
  return sum * Rational(1, std::int64_t(gt_count));
}

Rational Op::f1() const {
  // 2PR/(P+R) with P = tp/n, R = tp/g; the degenerate cases follow P=1 when
  // n=0 and R=1 when g=0.
  const Rational p = n == 0 ? Rational(1) : Rational(std::int64_t(tp), std::int64_t(n));
  const Rational r = g == 0 ? Rational(1) : Rational(std::int64_t(tp), std::int64_t(g));
  const Rational s = p + r;
  if (s.num == 0) return Rational(0);
  return Rational(2) * p * r * Rational(s.den, s.num);
}

Op at_threshold(const std::vector<Det>& dets, const std::vector<Gt>& gts, int conf_milli, Rational threshold) {
  std::vector<Det> kept;
  for (const auto& d : dets)
    if (d.conf_milli >= conf_milli) kept.push_back(d);
  const Match m = match(kept, gts, threshold);
  Op op;
  op.tp = std::size_t(std::count(m.tp.begin(), m.tp.end(), true));
  op.n = kept.size();
  op.g = gts.size();
  return op;
}

int select_threshold(const std::vector<Det>& dets, const std::vector<Gt>& gts, Rational threshold) {
  if (dets.empty()) throw std::domain_error("no detections");
  std::set<int> confs;
  for (const auto& d : dets) confs.insert(d.conf_milli);
  int best_conf = -1;
  Rational best_f1(-1);
  for (int c : confs) {  // ascending, so ties end on the highest value
    const Rational f = at_threshold(dets, gts, c, threshold).f1();
    if (!(f < best_f1)) {
      best_f1 = f;
      best_conf = c;
    }
  }
  return best_conf;
}

Instance random_instance(std::uint64_t seed, int max_dets, int max_gts) {
  Rng rng(seed);
  Instance inst;
  const int g = int(rng.uniform_int(0, max_gts));
  const int n = int(rng.uniform_int(0, max_dets));
  for (int i = 0; i < g; ++i)
    inst.gts.push_back({rng.uniform_int(0, 2),
                        {int(rng.uniform_int(0, 60)), int(rng.uniform_int(0, 60)), int(rng.uniform_int(4, 30)),
                         int(rng.uniform_int(4, 30))},
                        int(rng.uniform_int(1, 4))});
  for (int i = 0; i < n; ++i) {
    Det d;
    d.conf_milli = int(rng.uniform_int(1, 10)) * 100;
    if (!inst.gts.empty() && rng.bernoulli(0.6)) {
      const Gt& t = inst.gts[std::size_t(rng.uniform_int(0, std::int64_t(inst.gts.size()) - 1))];
      d.image = t.image;
      d.box = {t.box.x + int(rng.uniform_int(-2, 2)), t.box.y + int(rng.uniform_int(-2, 2)),
               std::max(1, t.box.w + int(rng.uniform_int(-3, 3))), std::max(1, t.box.h + int(rng.uniform_int(-3, 3)))};
    } else {
      d.image = rng.uniform_int(0, 2);
      d.box = {int(rng.uniform_int(0, 60)), int(rng.uniform_int(0, 60)), int(rng.uniform_int(2, 30)),
               int(rng.uniform_int(2, 30))};
    }
    inst.dets.push_back(d);
  }
  return inst;
}

std::vector<Detection> to_detections(const std::vector<Det>& dets) {
  std::vector<Detection> out;
  for (const auto& d : dets)
    out.push_back({d.image, {double(d.box.x), double(d.box.y), double(d.box.w), double(d.box.h)}, d.conf_milli / 1000.0});
  return out;
}

std::vector<GroundTruthBox> to_truth(const std::vector<Gt>& gts) {
  std::vector<GroundTruthBox> out;
  for (const auto& g : gts)
    out.push_back({g.image, {double(g.box.x), double(g.box.y), double(g.box.w), double(g.box.h)}, g.category});
  return out;
}

std::string compare_with_library(const Instance& inst, double ap_tolerance) {
  const Rational thr(7, 10);
  const auto dets = to_detections(inst.dets);
  const auto truth = to_truth(inst.gts);

  const Match om = match(inst.dets, inst.gts, thr);
  const MatchResult lm = match_detections(dets, truth, 0.7);
  if (lm.order != om.order) return "rank order differs";
  if (lm.true_positive != om.tp) return "TP/FP flags differ";
  if (lm.matched_gt != om.gt_of) return "matched truth indices differ";

  if (!inst.gts.empty()) {
    const Rational oap = average_precision(om, inst.gts.size());
    const double lap = average_precision(lm);
    if (std::abs(lap - oap.to_double()) > ap_tolerance)
      return fmt::format("AP {} vs oracle {}/{}", lap, oap.num, oap.den);
    const double per[] = {lap};
    if (mean_average_precision(per) != lap) return "single-category mAP differs from AP";
  }

  std::set<int> cuts{0, 1001};
  for (const auto& d : inst.dets) cuts.insert(d.conf_milli);
  for (int c : cuts) {
    const Op o = at_threshold(inst.dets, inst.gts, c, thr);
    const OperatingPoint l = pr_f1_at(dets, truth, c / 1000.0, 0.7);
    const double p = o.n == 0 ? 1.0 : double(o.tp) / double(o.n);
    const double r = o.g == 0 ? 1.0 : double(o.tp) / double(o.g);
    if (l.tp != o.tp || l.tp + l.fp != o.n || l.gt != o.g) return fmt::format("counts differ at {}", c);
    if (l.precision != p || l.recall != r) return fmt::format("P/R differ at {}", c);
    if (l.f1 != o.f1().to_double()) return fmt::format("F1 {} vs oracle {} at {}", l.f1, o.f1().to_double(), c);
  }

  if (!inst.dets.empty()) {
    const double lt = select_threshold(dets, truth, 0.7);
    const int ot = select_threshold(inst.dets, inst.gts, thr);
    if (lt != ot / 1000.0) return fmt::format("threshold {} vs oracle {}", lt, ot / 1000.0);
  }
  return {};
}

}  // namespace signforge::testing::oracle
