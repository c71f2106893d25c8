// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "signforge/generation_config.hpp"
#include "signforge/geometry.hpp"
#include "signforge/image.hpp"
#include "signforge/imageops.hpp"
#include "signforge/rng.hpp"
#include "signforge/template_catalog.hpp"

namespace signforge {

struct PlannedSign {
  int class_id = 0;
  double scale_px = 0.0;
  bool stacked_below_previous = false;
  friend bool operator==(const PlannedSign&, const PlannedSign&) = default;
};

using PlacementPlan = std::vector<PlannedSign>;

/// Draws the sign count, classes, scales and stacking chain. A sign is stacked
/// below its predecessor with probability stack_p1; when the predecessor was
/// itself stacked the probability is stack_p2. Chains stop at three signs.
PlacementPlan plan_placements(Rng& rng, const GenerationConfig& config, const Catalog& catalog);

struct SignTransform {
  double gain = 1.0;
  double theta_deg = 0.0;
  double scale_px = 0.0;
  PerspectiveJitter perspective;
  double region_mean = 0.0;
  friend bool operator==(const SignTransform&, const SignTransform&) = default;
};

struct PlacedSign {
  int class_id = 0;
  PixelBox bbox;  // tight box of the sign's non-zero alpha, sample coordinates
  bool stacked_below_previous = false;
  SignTransform transform;
  friend bool operator==(const PlacedSign&, const PlacedSign&) = default;
};

/// A warped, trimmed sign ready for compositing; raster size equals bbox size.
struct PreparedSign {
  PlacedSign sign;
  Rgba raster;
};

/// Geometry of one sample, decided before any background pixel is touched.
struct SampleLayout {
  double gain = 1.0;
  double offset = 0.0;
  std::vector<PreparedSign> signs;
  Rng photometric{0};  // continues into the render stage
};

/// Scales, warps and positions every planned sign. Signs that cannot be placed
/// without intersecting earlier ones are dropped; throws GenerationError when
/// none survive two placement passes.
SampleLayout layout_sample(const PlacementPlan& plan, Rng& rng, const GenerationConfig& config,
                           const Catalog& catalog, int canvas_width = 1500, int canvas_height = 1500);

struct SyntheticSample {
  Image image;
  std::vector<PlacedSign> signs;
  std::uint64_t sample_seed = 0;
  double gain = 1.0;
  double offset = 0.0;
  double blur_sigma = 0.0;
};

/// Per-pixel index of the sign that composited non-zero alpha there, -1 elsewhere.
struct CoverageMap {
  int width = 0;
  int height = 0;
  std::vector<std::int16_t> owner;
};

/// Full blending pipeline on a standardized background: photometric jitter of
/// the background, per-sign transform chain and compositing, final blur.
SyntheticSample synthesize_sample(const Image& background, const PlacementPlan& plan, Rng& rng,
                                  const GenerationConfig& config, const Catalog& catalog,
                                  CoverageMap* coverage = nullptr);

class BackgroundSource {
 public:
  virtual ~BackgroundSource() = default;
  virtual std::size_t size() const = 0;
  virtual Image load(std::size_t index) const = 0;
  virtual std::string id(std::size_t index) const = 0;
};

class InMemoryBackgrounds final : public BackgroundSource {
 public:
  explicit InMemoryBackgrounds(std::vector<Image> images) : images_(std::move(images)) {}
  std::size_t size() const override { return images_.size(); }
  Image load(std::size_t index) const override { return images_.at(index); }
  std::string id(std::size_t index) const override { return std::to_string(index); }

 private:
  std::vector<Image> images_;
};

/// Every *.png in a directory, sorted by file name.
class DirectoryBackgrounds final : public BackgroundSource {
 public:
  explicit DirectoryBackgrounds(const std::filesystem::path& dir);
  std::size_t size() const override { return files_.size(); }
  Image load(std::size_t index) const override;
  std::string id(std::size_t index) const override;

 private:
  std::vector<std::filesystem::path> files_;
};

/// Sample `index` of a run: background choice, plan and synthesis all come
/// from derive_sample_rng(config.master_seed, index).
struct GeneratedSample {
  SyntheticSample sample;
  std::size_t background_index = 0;
};
GeneratedSample make_sample(const GenerationConfig& config, const BackgroundSource& backgrounds,
                            const Catalog& catalog, std::uint64_t index, CoverageMap* coverage = nullptr);

/// Annotations of sample `index` without rendering. Classes, boxes and
/// geometric transforms match make_sample; region_mean needs pixels and stays 0.
std::vector<PlacedSign> make_sample_annotations(const GenerationConfig& config, std::size_t background_count,
                                                const Catalog& catalog, std::uint64_t index);

inline constexpr int kPlacementAttempts = 100;

struct GenerateOptions {
  std::filesystem::path out_dir;
  int workers = 1;
  bool resume = false;
};

struct SampleFailure {
  std::uint64_t index = 0;
  std::string message;
};

struct GenerationSummary {
  std::uint64_t requested = 0;
  std::uint64_t generated = 0;
  std::uint64_t resumed = 0;
  std::vector<SampleFailure> failures;
  std::uint64_t annotations = 0;
};

std::string sample_file_name(const std::string& run_id, std::uint64_t index);

/// Materializes config.n_samples samples under out_dir: images, per-sample
/// label sidecars (labels/), annotations.json and annotations.csv. Output is
/// independent of the worker count. With `resume`, samples whose image and
/// sidecar already exist are reused.
GenerationSummary generate_dataset(const GenerationConfig& config, const BackgroundSource& backgrounds,
                                   const Catalog& catalog, const GenerateOptions& options);

}  // namespace signforge
