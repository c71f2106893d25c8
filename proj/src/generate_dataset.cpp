// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "signforge/codec.hpp"
#include "signforge/dataset_io.hpp"
#include "signforge/errors.hpp"
#include "signforge/log.hpp"
#include "signforge/synthesizer.hpp"

namespace signforge {

namespace fs = std::filesystem;

namespace {

void write_file_atomically(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

std::string sample_file_name(const std::string& run_id, std::uint64_t index) {
  return fmt::format("{}_{:06}.png", run_id, index);
}

GenerationSummary generate_dataset(const GenerationConfig& config, const BackgroundSource& backgrounds,
                                   const Catalog& catalog, const GenerateOptions& options) {
  config.validate();
  const std::uint64_t n = config.n_samples;
  if (n > 0 && backgrounds.size() == 0) throw GenerationError("background corpus is empty");
  if (n > 0 && catalog.empty()) throw GenerationError("template catalog is empty");

  const fs::path labels_dir = options.out_dir / "labels";
  fs::create_directories(labels_dir);

  GenerationSummary summary;
  summary.requested = n;
  std::vector<std::optional<SampleRecord>> records(n);
  std::mutex mutex;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> generated{0}, resumed{0};

  auto run_one = [&](std::uint64_t index) {
    const std::string name = sample_file_name(config.run_id, index);
    const fs::path image_path = options.out_dir / name;
    const fs::path label_path = labels_dir / (fs::path(name).stem().string() + ".json");
    if (options.resume && fs::exists(image_path) && fs::exists(label_path)) {
      records[index] = read_sample_record(read_file(label_path));
      ++resumed;
      return;
    }
    GeneratedSample g = make_sample(config, backgrounds, catalog, index);
    SampleRecord r;
    r.image_id = std::int64_t(index);
    r.file_name = name;
    r.width = g.sample.image.width();
    r.height = g.sample.image.height();
    r.seed = g.sample.sample_seed;
    r.background_id = backgrounds.id(g.background_index);
    r.gain = g.sample.gain;
    r.offset = g.sample.offset;
    r.blur_sigma = g.sample.blur_sigma;
    r.signs = std::move(g.sample.signs);
    write_png_fast(image_path, g.sample.image);
    write_file_atomically(label_path, write_sample_record(r));
    records[index] = std::move(r);
    ++generated;
  };

  auto worker = [&] {
    for (std::uint64_t index = next++; index < n; index = next++) {
      try {
        run_one(index);
        logger()->debug("sample {} done", index);
      } catch (const std::exception& e) {
        logger()->error("sample {}: {}", index, e.what());
        std::lock_guard lock(mutex);
        summary.failures.push_back({index, e.what()});
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

  std::sort(summary.failures.begin(), summary.failures.end(),
            [](const SampleFailure& a, const SampleFailure& b) { return a.index < b.index; });
  summary.generated = generated;
  summary.resumed = resumed;

  AnnotationSet set;
  for (const auto& t : catalog.templates()) set.categories.push_back({t.class_id, t.name});
  for (auto& r : records)
    if (r) {
      summary.annotations += r->signs.size();
      set.samples.push_back(std::move(*r));
    }
  const AnnotationDocuments docs = write_annotations(set);
  write_file_atomically(options.out_dir / "annotations.json", docs.coco_json);
  write_file_atomically(options.out_dir / "annotations.csv", docs.csv);
  return summary;
}

}  // namespace signforge
