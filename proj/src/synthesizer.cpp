// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/synthesizer.hpp"

#include <algorithm>
#include <cmath>

#include "signforge/codec.hpp"
#include "signforge/corpus.hpp"
#include "signforge/errors.hpp"

namespace signforge {

namespace {

constexpr int kMaxChain = 3;
constexpr int kPerspectiveRedraws = 16;
constexpr double kMaxStackGapFrac = 0.1;

struct WarpedSign {
  PlannedSign plan;
  SignTransform transform;
  Rgba raster;
  int gap_above = 0;  // vertical gap to the predecessor when stacked
};

PerspectiveJitter draw_convex_jitter(Rng& rng, int w, int h, double p) {
  for (int attempt = 0; attempt < kPerspectiveRedraws; ++attempt) {
    PerspectiveJitter j = PerspectiveJitter::draw(rng, w, h, p);
    std::array<Point, 4> quad{Point{0, 0}, Point{double(w), 0}, Point{double(w), double(h)}, Point{0, double(h)}};
    for (int k = 0; k < 4; ++k) {
      quad[k].x += j.corner_offsets[k].x;
      quad[k].y += j.corner_offsets[k].y;
    }
    if (j.is_zero() || is_strictly_convex(quad)) return j;
  }
  return {};
}

// Places signs [first, first + count) as one vertical stack. Returns false
// when no non-intersecting position was found within the attempt budget.
bool place_chain(std::vector<WarpedSign>& warped, std::size_t first, std::size_t count, Rng& rng, int canvas_w,
                 int canvas_h, std::vector<PreparedSign>& placed) {
  int width = 0, height = 0;
  for (std::size_t i = first; i < first + count; ++i) {
    width = std::max(width, warped[i].raster.width());
    height += warped[i].raster.height() + (i == first ? 0 : warped[i].gap_above);
  }
  if (width > canvas_w || height > canvas_h) return false;

  std::vector<PixelBox> local;
  int y = 0;
  for (std::size_t i = first; i < first + count; ++i) {
    if (i != first) y += warped[i].gap_above;
    const auto& r = warped[i].raster;
    local.push_back({(width - r.width()) / 2, y, r.width(), r.height()});
    y += r.height();
  }

  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    const int ox = int(rng.uniform_int(0, canvas_w - width));
    const int oy = int(rng.uniform_int(0, canvas_h - height));
    bool clear = true;
    for (const auto& box : local) {
      const PixelBox moved{box.x + ox, box.y + oy, box.w, box.h};
      for (const auto& other : placed)
        if (intersection_area(moved, other.sign.bbox) > 0) {
          clear = false;
          break;
        }
      if (!clear) break;
    }
    if (!clear) continue;
    for (std::size_t k = 0; k < count; ++k) {
      const WarpedSign& w = warped[first + k];
      PreparedSign p;
      p.sign.class_id = w.plan.class_id;
      p.sign.bbox = {local[k].x + ox, local[k].y + oy, local[k].w, local[k].h};
      p.sign.stacked_below_previous = k > 0;
      p.sign.transform = w.transform;
      p.raster = w.raster;
      placed.push_back(std::move(p));
    }
    return true;
  }
  return false;
}

std::vector<PreparedSign> place_all(std::vector<WarpedSign>& warped, Rng& rng, int canvas_w, int canvas_h) {
  std::vector<PreparedSign> placed;
  std::size_t first = 0;
  while (first < warped.size()) {
    std::size_t end = first + 1;
    while (end < warped.size() && warped[end].plan.stacked_below_previous) ++end;
    // A chain that cannot be placed loses members from its tail.
    for (std::size_t count = end - first; count > 0; --count)
      if (place_chain(warped, first, count, rng, canvas_w, canvas_h, placed)) break;
    first = end;
  }
  return placed;
}

}  // namespace

PlacementPlan plan_placements(Rng& rng, const GenerationConfig& config, const Catalog& catalog) {
  if (catalog.empty()) throw std::invalid_argument("plan_placements: empty catalog");
  if (!config.size_range) throw ConfigError("plan_placements: size_range is not set");
  const auto& support = config.count_support;
  if (support.empty()) throw ConfigError("plan_placements: empty count_support");

  const int count = support[std::size_t(rng.uniform_int(0, std::int64_t(support.size()) - 1))];
  PlacementPlan plan;
  plan.reserve(count);
  int chain = 0;
  for (int j = 0; j < count; ++j) {
    PlannedSign s;
    s.class_id = catalog.sample_class(rng);
    s.scale_px = rng.uniform(config.size_range->lo, config.size_range->hi);
    if (j > 0 && chain == 1) s.stacked_below_previous = rng.bernoulli(config.stack_p1);
    else if (j > 0 && chain == 2) s.stacked_below_previous = rng.bernoulli(config.stack_p2);
    chain = (s.stacked_below_previous && chain < kMaxChain) ? chain + 1 : 1;
    plan.push_back(s);
  }
  return plan;
}

SampleLayout layout_sample(const PlacementPlan& plan, Rng& rng, const GenerationConfig& config,
                           const Catalog& catalog, int canvas_width, int canvas_height) {
  SampleLayout layout;
  layout.photometric = rng.split();
  layout.gain = layout.photometric.uniform(config.gain_range.lo, config.gain_range.hi);
  layout.offset = layout.photometric.uniform(config.offset_range.lo, config.offset_range.hi);

  std::vector<WarpedSign> warped;
  warped.reserve(plan.size());
  for (const PlannedSign& p : plan) {
    const Template& tmpl = catalog.at(p.class_id);
    WarpedSign w;
    w.plan = p;
    w.transform.gain = layout.gain;
    w.transform.scale_px = p.scale_px;
    w.transform.perspective =
        draw_convex_jitter(rng, tmpl.image.width(), tmpl.image.height(), config.perspective_p);
    w.transform.theta_deg = rng.uniform(config.rotation_range.lo, config.rotation_range.hi);
    const Rgba scaled = scale_gain_template(tmpl.image, layout.gain);
    Rgba full = warp_template(scaled, w.transform.perspective, w.transform.theta_deg, p.scale_px);
    const PixelBox tight = opaque_bounds(full.alpha);
    w.raster = tight.empty() ? Rgba{} : crop(full, tight);
    warped.push_back(std::move(w));
  }
  for (std::size_t i = 1; i < warped.size(); ++i)
    if (warped[i].plan.stacked_below_previous)
      warped[i].gap_above = int(std::floor(rng.uniform(0.0, kMaxStackGapFrac) * warped[i - 1].raster.height()));

  // Signs that warped to nothing cannot be annotated; drop them and cut their chains.
  for (std::size_t i = 0; i < warped.size();) {
    if (warped[i].raster.width() > 0) {
      ++i;
      continue;
    }
    if (i + 1 < warped.size()) warped[i + 1].plan.stacked_below_previous = false;
    warped.erase(warped.begin() + std::ptrdiff_t(i));
  }

  layout.signs = place_all(warped, rng, canvas_width, canvas_height);
  if (layout.signs.empty() && !warped.empty()) layout.signs = place_all(warped, rng, canvas_width, canvas_height);
  if (layout.signs.empty()) throw GenerationError("no sign could be placed on the background");
  return layout;
}

SyntheticSample synthesize_sample(const Image& background, const PlacementPlan& plan, Rng& rng,
                                  const GenerationConfig& config, const Catalog& catalog, CoverageMap* coverage) {
  if (background.empty()) throw std::invalid_argument("synthesize_sample: empty background");
  SyntheticSample out;
  out.sample_seed = rng.seed();
  SampleLayout layout = layout_sample(plan, rng, config, catalog, background.width(), background.height());
  out.gain = layout.gain;
  out.offset = layout.offset;
  out.image = adjust_brightness_contrast(background, layout.gain, layout.offset);

  if (coverage) {
    coverage->width = background.width();
    coverage->height = background.height();
    coverage->owner.assign(std::size_t(background.width()) * background.height(), -1);
  }

  double largest = 0.0;
  for (std::size_t i = 0; i < layout.signs.size(); ++i) {
    PreparedSign& ps = layout.signs[i];
    const PixelBox& box = ps.sign.bbox;
    const double mean = region_mean(out.image, box);
    Rgba t = match_region_brightness(ps.raster, mean, config.brightness_constant);
    t = add_jitter(t, config.jitter_amplitude, layout.photometric);
    t = fade_borders(t, config.fade_frac, ps.sign.transform.scale_px);
    composite(out.image, t, box.x, box.y);
    if (coverage) {
      for (int y = 0; y < box.h; ++y)
        for (int x = 0; x < box.w; ++x)
          if (t.alpha.at(x, y) > 0.0f)
            coverage->owner[std::size_t(box.y + y) * coverage->width + box.x + x] = std::int16_t(i);
    }
    ps.sign.transform.region_mean = mean;
    largest = std::max(largest, ps.sign.transform.scale_px);
    out.signs.push_back(ps.sign);
  }

  if (config.blur_sigma_range) {
    out.blur_sigma = layout.photometric.uniform(config.blur_sigma_range->lo, config.blur_sigma_range->hi);
  } else {
    const double scale_rel = config.size_range ? largest / config.size_range->hi : 0.0;
    out.blur_sigma = layout.photometric.uniform(0.0, config.blur_max_coeff * scale_rel);
  }
  out.image = gaussian_blur(out.image, out.blur_sigma);
  return out;
}

DirectoryBackgrounds::DirectoryBackgrounds(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("background directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".png") files_.push_back(entry.path());
  }
  std::sort(files_.begin(), files_.end());
}

Image DirectoryBackgrounds::load(std::size_t index) const { return read_rgb(files_.at(index)); }

std::string DirectoryBackgrounds::id(std::size_t index) const { return files_.at(index).stem().string(); }

GeneratedSample make_sample(const GenerationConfig& config, const BackgroundSource& backgrounds,
                            const Catalog& catalog, std::uint64_t index, CoverageMap* coverage) {
  if (backgrounds.size() == 0) throw GenerationError("background corpus is empty");
  Rng rng = derive_sample_rng(config.master_seed, index);
  GeneratedSample g;
  g.background_index = std::size_t(rng.uniform_int(0, std::int64_t(backgrounds.size()) - 1));
  const PlacementPlan plan = plan_placements(rng, config, catalog);
  const Image background = backgrounds.load(g.background_index);
  if (background.width() != kBackgroundSize || background.height() != kBackgroundSize)
    throw GenerationError("background " + backgrounds.id(g.background_index) + " is not " +
                          std::to_string(kBackgroundSize) + "x" + std::to_string(kBackgroundSize));
  g.sample = synthesize_sample(background, plan, rng, config, catalog, coverage);
  return g;
}

std::vector<PlacedSign> make_sample_annotations(const GenerationConfig& config, std::size_t background_count,
                                                const Catalog& catalog, std::uint64_t index) {
  if (background_count == 0) throw GenerationError("background corpus is empty");
  Rng rng = derive_sample_rng(config.master_seed, index);
  rng.uniform_int(0, std::int64_t(background_count) - 1);
  const PlacementPlan plan = plan_placements(rng, config, catalog);
  SampleLayout layout = layout_sample(plan, rng, config, catalog, kBackgroundSize, kBackgroundSize);
  std::vector<PlacedSign> signs;
  for (const auto& ps : layout.signs) signs.push_back(ps.sign);
  return signs;
}

}  // namespace signforge
