// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>

#include <sys/wait.h>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mini_json.hpp"
#include "signforge/codec.hpp"
#include "signforge/dataset_io.hpp"
#include "signforge/errors.hpp"
#include "signforge/pipeline.hpp"

using namespace signforge;
using namespace signforge::testing;
namespace fs = std::filesystem;
namespace mj = signforge::testing::mini_json;

namespace {

const std::vector<CorpusImage> kSixImages = {
    {1, 800, 600, {"dog"}},          {2, 640, 640, {"car"}},   {3, 1000, 700, {"person", "bus"}},
    {4, 500, 480, {}},               {5, 1024, 768, {}},       {6, 400, 600, {"person"}},
};

int run_cli(const std::string& args) {
  const int status = std::system(fmt::format("{} {} >/dev/null 2>&1", SIGNFORGE_CLI_PATH, args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Generated {
  fs::path config;
  fs::path backgrounds;
  fs::path templates;
};

Generated write_generate_inputs(const TempDir& tmp, std::uint64_t n = 3) {
  Generated g;
  g.backgrounds = tmp / "bg";
  fs::create_directories(g.backgrounds);
  for (int i = 0; i < 2; ++i) write_png(g.backgrounds / fmt::format("{:012}.png", i), make_background(i));
  g.templates = write_template_set(tmp / "templates", 4);
  g.config = tmp / "config.json";
  spit(g.config, small_config(5, n).to_json() + "\n");
  return g;
}

std::string echoed_predictions(const std::string& coco) {
  std::vector<Detection> dets;
  for (const auto& b : read_ground_truth(coco).boxes) dets.push_back({b.image_id, b.bbox, 1.0});
  return write_predictions_json(dets);
}

}  // namespace

TEST(Prepare, SixImageFixture) {
  TempDir tmp;
  const auto ann = write_corpus(tmp / "corpus", kSixImages);
  PrepareOptions o{tmp / "corpus", ann, tmp / "out", {}, 2};
  const auto s = cmd_prepare(o);
  EXPECT_EQ(s.indexed, 6u);
  EXPECT_EQ(s.accepted, 3u);
  EXPECT_EQ(s.rejected, 3u);
  EXPECT_EQ(s.failed, 0u);
  for (int id : {1, 5, 6}) {
    const Image bg = read_rgb(tmp / "out" / fmt::format("{:012}.png", id));
    EXPECT_EQ(bg.width(), 1500);
    EXPECT_EQ(bg.height(), 1500);
  }
  EXPECT_FALSE(fs::exists(tmp / "out" / fmt::format("{:012}.png", 2)));

  const std::string manifest = slurp(tmp / "out" / "manifest.csv");
  EXPECT_EQ(manifest.substr(0, manifest.find('\n')), "source_id,original_w,original_h,accepted_flag,rejection_reason");
  EXPECT_NE(manifest.find("2,640,640,0,excluded_label:car"), std::string::npos);
  EXPECT_NE(manifest.find("4,500,480,0,height_below_600"), std::string::npos);
  EXPECT_NE(manifest.find("6,400,600,1,"), std::string::npos);

  const auto run = mj::parse(slurp(tmp / "out" / "run_manifest.json"));
  EXPECT_EQ(run["counts"]["accepted"].integer(), 3);
  EXPECT_TRUE(run["wall_clock_s"].is_object());

  // A rerun reports the same counts and rewrites identical backgrounds.
  const std::string first = slurp(tmp / "out" / fmt::format("{:012}.png", 5));
  const auto again = cmd_prepare(o);
  EXPECT_EQ(again.accepted, 3u);
  EXPECT_EQ(slurp(tmp / "out" / fmt::format("{:012}.png", 5)), first);
}

TEST(Prepare, UnreadableImageIsMarkedFailed) {
  TempDir tmp;
  const auto ann = write_corpus(tmp / "corpus", {{1, 800, 600, {}}, {2, 800, 600, {}}});
  spit(tmp / "corpus" / "img_0002.jpg", "not a jpeg");
  const auto s = cmd_prepare({tmp / "corpus", ann, tmp / "out", {}, 1});
  EXPECT_EQ(s.accepted, 1u);
  EXPECT_EQ(s.failed, 1u);
  EXPECT_NE(slurp(tmp / "out" / "manifest.csv").find("2,800,600,0,unreadable"), std::string::npos);
}

TEST(Prepare, EmptyCorpusAndMissingDirectory) {
  TempDir tmp;
  const auto ann = write_corpus(tmp / "corpus", {});
  const auto s = cmd_prepare({tmp / "corpus", ann, tmp / "out", {}, 1});
  EXPECT_EQ(s.indexed, 0u);
  EXPECT_EQ(s.accepted, 0u);
  EXPECT_THROW(cmd_prepare({tmp / "nowhere", ann, tmp / "out", {}, 1}), IoError);
  EXPECT_THROW(cmd_prepare({tmp / "corpus", tmp / "missing.json", tmp / "out", {}, 1}), IoError);
}

TEST(Generate, SnapshotAndManifest) {
  TempDir tmp;
  const auto in = write_generate_inputs(tmp);
  const std::string bytes = slurp(in.config);
  const auto s = cmd_generate({in.config, in.backgrounds, in.templates, tmp / "out", std::nullopt, 2, 1, false});
  EXPECT_EQ(s.requested, 2u);
  EXPECT_EQ(s.generated, 2u);
  EXPECT_EQ(slurp(tmp / "out" / "config.snapshot.json"), bytes);
  const auto run = mj::parse(slurp(tmp / "out" / "run_manifest.json"));
  EXPECT_EQ(run["status"].str(), "complete");
  EXPECT_EQ(run["overrides"]["n_samples"].integer(), 2);
  EXPECT_EQ(run["counts"]["generated"].integer(), 2);
  EXPECT_EQ(run["counts"]["classes"].integer(), 4);
  EXPECT_TRUE(fs::exists(tmp / "out" / "annotations.json"));
  EXPECT_TRUE(fs::exists(tmp / "out" / "annotations.csv"));
}

TEST(Generate, MissingSizeRangeIsAConfigError) {
  TempDir tmp;
  const auto in = write_generate_inputs(tmp);
  spit(in.config, R"({"n_samples": 2})");
  EXPECT_THROW(cmd_generate({in.config, in.backgrounds, in.templates, tmp / "out", std::nullopt, std::nullopt, 1, false}),
               ConfigError);
}

TEST(Generate, ManifestWrittenOnFailure) {
  TempDir tmp;
  const auto in = write_generate_inputs(tmp);
  EXPECT_THROW(cmd_generate({in.config, tmp / "no_backgrounds", in.templates, tmp / "out", std::nullopt, 1, 1, false}),
               IoError);
  const auto run = mj::parse(slurp(tmp / "out" / "run_manifest.json"));
  EXPECT_EQ(run["status"].str(), "failed");
  EXPECT_TRUE(run.has("error"));
}

TEST(Evaluate, EchoedTruthScoresOne) {
  TempDir tmp;
  const auto in = write_generate_inputs(tmp);
  cmd_generate({in.config, in.backgrounds, in.templates, tmp / "out", std::nullopt, 3, 1, false});
  const fs::path gt = tmp / "out" / "annotations.json";
  spit(tmp / "pred.json", echoed_predictions(slurp(gt)));
  const auto r = cmd_evaluate({tmp / "pred.json", gt, kDefaultIouThreshold, std::nullopt, std::nullopt, tmp / "rep" / "r.json"});
  EXPECT_EQ(r.map, 1.0);
  EXPECT_EQ(r.ap, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.threshold_source, "default");
  EXPECT_TRUE(fs::exists(tmp / "rep" / "r.categories.csv"));
  EXPECT_EQ(mj::parse(slurp(tmp / "rep" / "r.json"))["map"].num(), 1.0);

  spit(tmp / "empty.json", "[]");
  const auto none = cmd_evaluate({tmp / "empty.json", gt, kDefaultIouThreshold, std::nullopt, std::nullopt, std::nullopt});
  EXPECT_EQ(none.map, 0.0);
  EXPECT_EQ(none.recall, 0.0);
}

TEST(Evaluate, UnknownImageIdIsAnIntegrityError) {
  TempDir tmp;
  spit(tmp / "gt.txt", "00001.ppm;10;10;29;29;3\n");
  spit(tmp / "pred.json", R"([{"image_id": 2, "bbox": [10, 10, 20, 20], "score": 0.9}])");
  EXPECT_THROW(cmd_evaluate({tmp / "pred.json", tmp / "gt.txt", kDefaultIouThreshold, std::nullopt, std::nullopt, std::nullopt}),
               IntegrityError);
}

TEST(Evaluate, GtsdbTruthAndThresholdSources) {
  TempDir tmp;
  // Inclusive corners 10..29 make a 20 px box.
  spit(tmp / "gt.txt", "00001.ppm;10;10;29;29;3\n00001.ppm;100;100;139;139;5\n");
  spit(tmp / "pred.json", R"([{"image_id": 1, "bbox": [10, 10, 20, 20], "score": 0.9},
                              {"image_id": 1, "bbox": [300, 300, 20, 20], "score": 0.8},
                              {"image_id": 1, "bbox": [100, 100, 40, 40], "score": 0.4}])");
  const auto r = cmd_evaluate({tmp / "pred.json", tmp / "gt.txt", kDefaultIouThreshold, 0.5, std::nullopt, std::nullopt});
  EXPECT_EQ(r.threshold_source, "fixed");
  EXPECT_EQ(r.tp, 1u);
  EXPECT_EQ(r.fp, 1u);
  EXPECT_EQ(r.ap, 5.0 / 6.0);

  const auto v = cmd_evaluate({tmp / "pred.json", tmp / "gt.txt", kDefaultIouThreshold, std::nullopt,
                               std::pair{tmp / "pred.json", tmp / "gt.txt"}, std::nullopt});
  EXPECT_EQ(v.threshold_source, "validation");
  EXPECT_EQ(v.chosen_threshold, 0.4);
  EXPECT_EQ(v.recall, 1.0);
}

TEST(ImportGtsdb, WritesCocoTruth) {
  TempDir tmp;
  spit(tmp / "gt.txt", "00000.ppm;774;411;815;446;11\n00001.ppm;983;388;1024;432;40\n");
  cmd_import_gtsdb_gt(tmp / "gt.txt", tmp / "gt.json");
  const auto truth = read_ground_truth(slurp(tmp / "gt.json"));
  ASSERT_EQ(truth.boxes.size(), 2u);
  EXPECT_EQ(truth.boxes[0].bbox.w, 42.0);
  EXPECT_EQ(truth.boxes[1].category_id, 40);
}

TEST(Cli, ExitCodes) {
  TempDir tmp;
  EXPECT_EQ(run_cli("--version"), 0);
  EXPECT_EQ(run_cli("no-such-command"), 2);
  EXPECT_EQ(run_cli(fmt::format("prepare {} {} -o {}", (tmp / "none").string(), (tmp / "a.json").string(),
                                (tmp / "o").string())),
            4);
  spit(tmp / "gt.txt", "00001.ppm;10;10;29;29;3\n");
  spit(tmp / "pred.json", R"([{"image_id": 9, "bbox": [10, 10, 20, 20], "score": 0.9}])");
  EXPECT_EQ(run_cli(fmt::format("evaluate {} {}", (tmp / "pred.json").string(), (tmp / "gt.txt").string())), 3);
  spit(tmp / "bad.json", R"({"n_samples": 1})");
  EXPECT_EQ(run_cli(fmt::format("generate --config {} {} {} -o {}", (tmp / "bad.json").string(), tmp.path().string(),
                                (tmp / "m.csv").string(), (tmp / "o").string())),
            2);
  spit(tmp / "pred.json", R"([{"image_id": 1, "bbox": [10, 10, 20, 20], "score": 0.9}])");
  EXPECT_EQ(run_cli(fmt::format("evaluate {} {} -o {}", (tmp / "pred.json").string(), (tmp / "gt.txt").string(),
                                (tmp / "r.json").string())),
            0);
  EXPECT_EQ(mj::parse(slurp(tmp / "r.json"))["ap"].num(), 1.0);
}
