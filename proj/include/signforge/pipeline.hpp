// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "signforge/corpus.hpp"
#include "signforge/detection_eval.hpp"
#include "signforge/synthesizer.hpp"

namespace signforge {

std::string tool_version();

struct PrepareOptions {
  std::filesystem::path corpus_dir;
  std::filesystem::path annotations;
  std::filesystem::path out_dir;
  ExclusionPolicy policy;
  int workers = 1;
};

struct PrepareSummary {
  std::size_t indexed = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t failed = 0;  // accepted by the filter but unreadable
};

/// parse -> filter -> standardize. Writes `<zero-padded id>.png` backgrounds,
/// manifest.csv (every indexed image) and run_manifest.json into out_dir.
/// Throws IoError naming the path when the annotation file or corpus
/// directory cannot be read.
PrepareSummary cmd_prepare(const PrepareOptions& options);

struct GenerateCommand {
  std::filesystem::path config;
  std::filesystem::path backgrounds_dir;
  std::filesystem::path templates_manifest;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n;
  int workers = 1;
  bool resume = false;
};

/// Loads config (flags override it), catalog and backgrounds, then runs
/// generate_dataset. Writes config.snapshot.json (input bytes verbatim) and
/// run_manifest.json next to the dataset.
GenerationSummary cmd_generate(const GenerateCommand& command);

struct EvaluateCommand {
  std::filesystem::path predictions;
  std::filesystem::path ground_truth;  // COCO JSON, or GTSDB gt.txt
  double iou = kDefaultIouThreshold;
  std::optional<double> threshold;
  /// (predictions, ground truth) used to pick the F1-maximizing threshold.
  std::optional<std::pair<std::filesystem::path, std::filesystem::path>> select_threshold_on;
  std::optional<std::filesystem::path> out;  // report JSON; CSV goes next to it
};

/// Throws IntegrityError when a prediction names an image absent from the truth.
EvalReport cmd_evaluate(const EvaluateCommand& command);

void cmd_import_gtsdb_gt(const std::filesystem::path& gt_txt, const std::filesystem::path& out_json,
                         int width = 1360, int height = 800);

}  // namespace signforge
