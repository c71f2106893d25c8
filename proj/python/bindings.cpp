// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstring>
#include <tuple>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "signforge/corpus.hpp"
#include "signforge/dataset_io.hpp"
#include "signforge/detection_eval.hpp"
#include "signforge/errors.hpp"
#include "signforge/imageops.hpp"
#include "signforge/pipeline.hpp"

namespace py = pybind11;
using namespace signforge;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F32Array = py::array_t<float, py::array::c_style | py::array::forcecast>;

Image to_image(const U8Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw std::invalid_argument("expected an HxWx3 uint8 array");
  const int h = int(a.shape(0)), w = int(a.shape(1));
  std::vector<std::uint8_t> px(a.data(), a.data() + a.size());
  return Image(w, h, std::move(px));
}

U8Array from_image(const Image& img) {
  U8Array out({py::ssize_t(img.height()), py::ssize_t(img.width()), py::ssize_t(3)});
  std::memcpy(out.mutable_data(), img.pixels().data(), img.pixels().size());
  return out;
}

PlaneF to_plane(const F32Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected an HxW float array");
  PlaneF p(int(a.shape(1)), int(a.shape(0)));
  std::memcpy(p.data.data(), a.data(), p.data.size() * sizeof(float));
  return p;
}

F32Array from_plane(const PlaneF& p) {
  F32Array out({py::ssize_t(p.height), py::ssize_t(p.width)});
  std::memcpy(out.mutable_data(), p.data.data(), p.data.size() * sizeof(float));
  return out;
}

using BoxTuple = std::tuple<double, double, double, double>;
using DetTuple = std::tuple<std::int64_t, double, double, double, double, double>;
using GtTuple = std::tuple<std::int64_t, double, double, double, double, int>;

Box to_box(const BoxTuple& t) { return {std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)}; }

std::vector<Detection> to_detections(const std::vector<DetTuple>& rows) {
  std::vector<Detection> out;
  for (const auto& [id, x, y, w, h, conf] : rows) out.push_back({id, {x, y, w, h}, conf});
  return out;
}

std::vector<GroundTruthBox> to_truth(const std::vector<GtTuple>& rows) {
  std::vector<GroundTruthBox> out;
  for (const auto& [id, x, y, w, h, cat] : rows) out.push_back({id, {x, y, w, h}, cat});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "signforge native core";
  m.attr("__version__") = tool_version();

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<IntegrityError>(m, "IntegrityError", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<GeometryError>(m, "GeometryError", base);
  py::register_exception<EvaluationError>(m, "EvaluationError", base);
  py::register_exception<GenerationError>(m, "GenerationError", base);
  py::register_exception<IoError>(m, "IoError", base);

  m.def("adjust_brightness_contrast",
        [](const U8Array& img, double gain, double offset) {
          return from_image(adjust_brightness_contrast(to_image(img), gain, offset));
        },
        py::arg("image"), py::arg("gain"), py::arg("offset"));
  m.def("gaussian_blur", [](const U8Array& img, double sigma) { return from_image(gaussian_blur(to_image(img), sigma)); },
        py::arg("image"), py::arg("sigma"));
  m.def("gaussian_blur_plane",
        [](const F32Array& plane, double sigma) { return from_plane(gaussian_blur(to_plane(plane), sigma)); },
        py::arg("plane"), py::arg("sigma"));
  m.def("gaussian_kernel", &gaussian_kernel, py::arg("sigma"));
  m.def("composite",
        [](const U8Array& background, const U8Array& rgb, const F32Array& alpha, int x, int y) {
          Image bg = to_image(background);
          composite(bg, Rgba(to_image(rgb), to_plane(alpha)), x, y);
          return from_image(bg);
        },
        py::arg("background"), py::arg("rgb"), py::arg("alpha"), py::arg("x"), py::arg("y"));

  m.def("accepted_backgrounds",
        [](const std::string& coco_json, const std::optional<std::string>& policy_json) {
          const ExclusionPolicy policy = policy_json ? ExclusionPolicy::from_json(*policy_json) : ExclusionPolicy{};
          return filter_backgrounds(parse_coco_annotations(coco_json), policy);
        },
        py::arg("coco_json"), py::arg("policy_json") = py::none());

  m.def("iou", [](const BoxTuple& a, const BoxTuple& b) { return iou(to_box(a), to_box(b)); });
  m.def("average_precision",
        [](const std::vector<bool>& flags, std::size_t gt_count) {
          MatchResult r;
          r.true_positive = flags;
          r.gt_count = gt_count;
          for (std::size_t i = 0; i < flags.size(); ++i) r.order.push_back(i);
          r.matched_gt.resize(flags.size());
          return average_precision(r);
        },
        py::arg("flags"), py::arg("gt_count"));
  m.def("select_threshold",
        [](const std::vector<DetTuple>& dets, const std::vector<GtTuple>& truth, double iou_threshold) {
          return select_threshold(to_detections(dets), to_truth(truth), iou_threshold);
        },
        py::arg("detections"), py::arg("truth"), py::arg("iou") = kDefaultIouThreshold);
  m.def("evaluate_json",
        [](const std::vector<DetTuple>& dets, const std::vector<GtTuple>& truth, double conf, double iou_threshold) {
          return report_to_json(evaluate(to_detections(dets), to_truth(truth), conf, iou_threshold));
        },
        py::arg("detections"), py::arg("truth"), py::arg("threshold") = 0.0, py::arg("iou") = kDefaultIouThreshold);

  m.def("prepare",
        [](const std::filesystem::path& corpus_dir, const std::filesystem::path& annotations,
           const std::filesystem::path& out_dir, const std::optional<std::string>& policy_json, int workers) {
          PrepareOptions o{corpus_dir, annotations, out_dir,
                           policy_json ? ExclusionPolicy::from_json(*policy_json) : ExclusionPolicy{}, workers};
          PrepareSummary s;
          {
            py::gil_scoped_release release;
            s = cmd_prepare(o);
          }
          py::dict d;
          d["indexed"] = s.indexed;
          d["accepted"] = s.accepted;
          d["rejected"] = s.rejected;
          d["failed"] = s.failed;
          return d;
        },
        py::arg("corpus_dir"), py::arg("annotations"), py::arg("out_dir"), py::arg("policy_json") = py::none(),
        py::arg("workers") = 1);

  m.def("generate",
        [](const std::filesystem::path& config, const std::filesystem::path& backgrounds_dir,
           const std::filesystem::path& templates_manifest, const std::filesystem::path& out_dir,
           std::optional<std::uint64_t> seed, std::optional<std::uint64_t> n, int workers, bool resume) {
          GenerationSummary s;
          {
            py::gil_scoped_release release;
            s = cmd_generate({config, backgrounds_dir, templates_manifest, out_dir, seed, n, workers, resume});
          }
          py::list failures;
          for (const auto& f : s.failures) failures.append(py::make_tuple(f.index, f.message));
          py::dict d;
          d["requested"] = s.requested;
          d["generated"] = s.generated;
          d["resumed"] = s.resumed;
          d["annotations"] = s.annotations;
          d["failures"] = failures;
          return d;
        },
        py::arg("config"), py::arg("backgrounds_dir"), py::arg("templates_manifest"), py::arg("out_dir"),
        py::arg("seed") = py::none(), py::arg("n") = py::none(), py::arg("workers") = 1, py::arg("resume") = false);

  m.def("evaluate_files_json",
        [](const std::filesystem::path& predictions, const std::filesystem::path& ground_truth, double iou_threshold,
           std::optional<double> threshold, std::optional<std::filesystem::path> out) {
          EvaluateCommand c;
          c.predictions = predictions;
          c.ground_truth = ground_truth;
          c.iou = iou_threshold;
          c.threshold = threshold;
          c.out = std::move(out);
          return report_to_json(cmd_evaluate(c));
        },
        py::arg("predictions"), py::arg("ground_truth"), py::arg("iou") = kDefaultIouThreshold,
        py::arg("threshold") = py::none(), py::arg("out") = py::none());

  m.def("import_gtsdb_gt", &cmd_import_gtsdb_gt, py::arg("gt_txt"), py::arg("out_json"), py::arg("width") = 1360,
        py::arg("height") = 800);
}
