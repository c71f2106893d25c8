// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "signforge/errors.hpp"
#include "signforge/log.hpp"
#include "signforge/pipeline.hpp"

namespace fs = std::filesystem;
using namespace signforge;

namespace {

// 0 ok, 1 partial or runtime failure, 2 usage/config, 3 integrity, 4 io.
int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return 2;
  if (dynamic_cast<const IntegrityError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic traffic-sign dataset generator and detection evaluator"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  PrepareOptions prep;
  std::string policy_path;
  auto* prepare = app.add_subcommand("prepare", "filter and standardize a COCO background corpus");
  prepare->add_option("corpus_dir", prep.corpus_dir, "directory holding the corpus images")->required();
  prepare->add_option("annotations", prep.annotations, "COCO instances JSON")->required();
  prepare->add_option("-o,--out", prep.out_dir, "output directory")->required();
  prepare->add_option("--policy", policy_path, "exclusion policy JSON");
  prepare->add_option("--workers", prep.workers)->check(CLI::PositiveNumber);

  GenerateCommand gen;
  std::uint64_t seed = 0, n = 0;
  auto* generate = app.add_subcommand("generate", "render a synthetic dataset");
  generate->add_option("--config", gen.config)->required();
  generate->add_option("backgrounds_dir", gen.backgrounds_dir)->required();
  generate->add_option("templates_manifest", gen.templates_manifest)->required();
  generate->add_option("-o,--out", gen.out_dir)->required();
  auto* seed_opt = generate->add_option("--seed", seed, "override master_seed");
  auto* n_opt = generate->add_option("--n", n, "override n_samples");
  generate->add_option("--workers", gen.workers)->check(CLI::PositiveNumber);
  generate->add_flag("--resume", gen.resume, "keep samples already on disk");

  EvaluateCommand eval;
  double threshold = 0.0;
  std::vector<std::string> validation;
  std::string eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "score detections against ground truth");
  evaluate->add_option("predictions", eval.predictions)->required();
  evaluate->add_option("ground_truth", eval.ground_truth, "COCO JSON or GTSDB gt.txt")->required();
  evaluate->add_option("--iou", eval.iou)->check(CLI::Range(0.0, 1.0));
  auto* thr_opt = evaluate->add_option("--threshold", threshold);
  auto* sel_opt = evaluate->add_option("--select-threshold-on", validation, "validation predictions and ground truth")
                      ->expected(2);
  thr_opt->excludes(sel_opt);
  evaluate->add_option("-o,--out", eval_out, "report JSON path (stdout when absent)");

  fs::path gt_txt, gt_json;
  int gt_w = 1360, gt_h = 800;
  auto* import_gt = app.add_subcommand("import-gtsdb-gt", "convert GTSDB gt.txt to COCO JSON");
  import_gt->add_option("gt_txt", gt_txt)->required();
  import_gt->add_option("-o,--out", gt_json)->required();
  import_gt->add_option("--width", gt_w);
  import_gt->add_option("--height", gt_h);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (prepare->parsed()) {
      if (!policy_path.empty()) prep.policy = ExclusionPolicy::from_json(slurp(policy_path));
      const PrepareSummary s = cmd_prepare(prep);
      fmt::print(stderr, "prepare: {} indexed, {} accepted, {} rejected, {} failed\n", s.indexed, s.accepted,
                 s.rejected, s.failed);
      return s.failed == 0 ? 0 : 1;
    }
    if (generate->parsed()) {
      if (*seed_opt) gen.seed = seed;
      if (*n_opt) gen.n = n;
      const GenerationSummary s = cmd_generate(gen);
      fmt::print(stderr, "generate: {}/{} samples ({} resumed), {} failed, {} annotations\n", s.generated,
                 s.requested, s.resumed, s.failures.size(), s.annotations);
      return s.failures.empty() ? 0 : 1;
    }
    if (evaluate->parsed()) {
      if (*thr_opt) eval.threshold = threshold;
      if (!validation.empty()) eval.select_threshold_on = std::make_pair(fs::path(validation[0]), fs::path(validation[1]));
      if (!eval_out.empty()) eval.out = eval_out;
      const EvalReport r = cmd_evaluate(eval);
      if (!eval.out) std::cout << report_to_json(r);
      fmt::print(stderr, "evaluate: AP {:.4f} P {:.4f} R {:.4f} F1 {:.4f} at threshold {:.6f} ({})\n", r.ap,
                 r.precision, r.recall, r.f1, r.chosen_threshold, r.threshold_source);
      return 0;
    }
    if (import_gt->parsed()) {
      cmd_import_gtsdb_gt(gt_txt, gt_json, gt_w, gt_h);
      return 0;
    }
  } catch (const std::exception& e) {
    logger()->critical("{}", e.what());
    return exit_code_for(e);
  }
  return 2;
}
