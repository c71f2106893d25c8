// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "signforge/codec.hpp"
#include "signforge/dataset_io.hpp"
#include "signforge/errors.hpp"
#include "signforge/log.hpp"

#ifndef SIGNFORGE_VERSION
#define SIGNFORGE_VERSION "0.0.0"
#endif

namespace signforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_text(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot read ") + what + " " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  return quoted + "\"";
}

GroundTruthSet load_truth(const fs::path& path) {
  const std::string text = read_text(path, "ground truth");
  if (path.extension() == ".txt") return import_gtsdb_gt(text).truth;
  return read_ground_truth(text);
}

void check_ids(std::span<const Detection> detections, const GroundTruthSet& truth, const fs::path& where) {
  const std::set<std::int64_t> known(truth.image_ids.begin(), truth.image_ids.end());
  for (const auto& d : detections)
    if (!known.contains(d.image_id))
      throw IntegrityError("prediction for image_id " + std::to_string(d.image_id) + " in " + where.string() +
                           " has no ground-truth image");
}

}  // namespace

std::string tool_version() { return SIGNFORGE_VERSION; }

PrepareSummary cmd_prepare(const PrepareOptions& options) {
  const auto t0 = Clock::now();
  std::error_code ec;
  if (!fs::is_directory(options.corpus_dir, ec)) throw IoError("corpus directory not readable: " + options.corpus_dir.string());
  const CocoIndex index = parse_coco_annotations(read_text(options.annotations, "annotation file"));
  const double t_parse = seconds_since(t0);
  fs::create_directories(options.out_dir);

  struct Row {
    std::int64_t id;
    int w, h;
    bool accepted;
    std::string reason;
  };
  std::vector<Row> rows;
  std::vector<std::size_t> todo;
  for (const auto& img : index.images) {
    const FilterVerdict v = judge_background(img, index.labels_of(img.id), options.policy);
    rows.push_back({img.id, img.width, img.height, v.accepted, v.reason});
    if (v.accepted) todo.push_back(rows.size() - 1);
  }
  if (index.images.empty()) logger()->warn("corpus annotation file lists no images");

  PrepareSummary summary;
  summary.indexed = rows.size();
  const auto t1 = Clock::now();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < todo.size(); k = next++) {
      Row& row = rows[todo[k]];
      const CocoImage& img = index.images[todo[k]];
      try {
        const Image raster = read_rgb(options.corpus_dir / img.file_name);
        row.w = raster.width();
        row.h = raster.height();
        write_png(options.out_dir / fmt::format("{:012}.png", img.id), standardize_background(raster));
      } catch (const std::exception& e) {
        logger()->error("{}", e.what());
        row.accepted = false;
        row.reason = "unreadable";
      }
    }
  };
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::string manifest = "source_id,original_w,original_h,accepted_flag,rejection_reason\n";
  for (const auto& r : rows) {
    manifest += fmt::format("{},{},{},{},{}\n", r.id, r.w, r.h, r.accepted ? 1 : 0, csv_field(r.reason));
    if (r.accepted) ++summary.accepted;
    else if (r.reason == "unreadable") ++summary.failed;
    else ++summary.rejected;
  }
  write_text(options.out_dir / "manifest.csv", manifest);

  const json run = {
      {"run_id", "prepare"},
      {"tool_version", tool_version()},
      {"policy",
       {{"excluded_labels", options.policy.excluded_labels},
        {"min_width", options.policy.min_width},
        {"min_height", options.policy.min_height}}},
      {"counts",
       {{"indexed", summary.indexed},
        {"accepted", summary.accepted},
        {"rejected", summary.rejected},
        {"failed", summary.failed}}},
      {"wall_clock_s", {{"parse", t_parse}, {"standardize", seconds_since(t1)}}},
  };
  write_text(options.out_dir / "run_manifest.json", run.dump(2) + "\n");
  logger()->info("prepare: {} indexed, {} accepted, {} rejected, {} failed", summary.indexed, summary.accepted,
                 summary.rejected, summary.failed);
  return summary;
}

GenerationSummary cmd_generate(const GenerateCommand& command) {
  const auto t0 = Clock::now();
  const std::string config_bytes = read_text(command.config, "config");
  GenerationConfig config = GenerationConfig::from_json(config_bytes);
  json overrides = json::object();
  if (command.seed) {
    config.master_seed = *command.seed;
    overrides["master_seed"] = *command.seed;
  }
  if (command.n) {
    config.n_samples = *command.n;
    overrides["n_samples"] = *command.n;
  }
  config.validate();

  fs::create_directories(command.out_dir);
  write_text(command.out_dir / "config.snapshot.json", config_bytes);

  json run = {
      {"run_id", config.run_id},
      {"tool_version", tool_version()},
      {"master_seed", config.master_seed},
      {"config_snapshot", "config.snapshot.json"},
      {"overrides", overrides},
      {"effective_config", json::parse(config.to_json())},
      {"workers", command.workers},
  };
  GenerationSummary summary;
  summary.requested = config.n_samples;
  std::size_t background_count = 0;
  int class_count = 0;
  double t_load = 0.0;
  auto write_run = [&](const std::string& status) {
    json failures = json::array();
    for (const auto& f : summary.failures) failures.push_back({{"index", f.index}, {"error", f.message}});
    run["status"] = status;
    run["counts"] = {{"backgrounds", background_count}, {"classes", class_count},
                     {"requested", summary.requested}, {"generated", summary.generated},
                     {"resumed", summary.resumed},     {"failed", summary.failures.size()},
                     {"annotations", summary.annotations}};
    run["failures"] = failures;
    run["wall_clock_s"] = {{"load", t_load}, {"generate", seconds_since(t0) - t_load}};
    write_text(command.out_dir / "run_manifest.json", run.dump(2) + "\n");
  };

  try {
    const Catalog catalog = load_catalog_manifest(command.templates_manifest);
    class_count = catalog.class_count();
    const DirectoryBackgrounds backgrounds(command.backgrounds_dir);
    background_count = backgrounds.size();
    t_load = seconds_since(t0);
    logger()->info("generate: {} samples from {} backgrounds, {} classes", config.n_samples, background_count,
                   class_count);
    summary = generate_dataset(config, backgrounds, catalog, {command.out_dir, command.workers, command.resume});
  } catch (const std::exception& e) {
    run["error"] = e.what();
    write_run("failed");
    throw;
  }
  write_run(summary.failures.empty() ? "complete" : "partial");
  return summary;
}

EvalReport cmd_evaluate(const EvaluateCommand& command) {
  const std::vector<Detection> detections = read_predictions(read_text(command.predictions, "predictions"));
  const GroundTruthSet truth = load_truth(command.ground_truth);
  check_ids(detections, truth, command.predictions);

  double threshold = 0.0;
  std::string source = "default";
  if (command.threshold) {
    threshold = *command.threshold;
    source = "fixed";
  } else if (command.select_threshold_on) {
    const auto& [val_pred, val_gt] = *command.select_threshold_on;
    const std::vector<Detection> val_dets = read_predictions(read_text(val_pred, "validation predictions"));
    const GroundTruthSet val_truth = load_truth(val_gt);
    check_ids(val_dets, val_truth, val_pred);
    threshold = select_threshold(val_dets, val_truth.boxes, command.iou);
    source = "validation";
  }

  EvalReport report = evaluate(detections, truth.boxes, threshold, command.iou);
  report.threshold_source = source;
  if (command.out) {
    if (command.out->has_parent_path()) fs::create_directories(command.out->parent_path());
    write_text(*command.out, report_to_json(report));
    fs::path csv = *command.out;
    csv.replace_extension(".categories.csv");
    write_text(csv, category_recall_csv(report.per_category));
  }
  return report;
}

void cmd_import_gtsdb_gt(const fs::path& gt_txt, const fs::path& out_json, int width, int height) {
  const GtsdbImport imported = import_gtsdb_gt(read_text(gt_txt, "GTSDB ground truth"));
  if (out_json.has_parent_path()) fs::create_directories(out_json.parent_path());
  write_text(out_json, write_ground_truth_json(imported, width, height));
}

}  // namespace signforge
