// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/codec.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "signforge/errors.hpp"

namespace signforge {

namespace {

cv::Mat to_bgr(const Image& img) {
  cv::Mat mat(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    const auto in = img.row(y);
    auto* out = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      out[3 * x + 0] = in[3 * x + 2];
      out[3 * x + 1] = in[3 * x + 1];
      out[3 * x + 2] = in[3 * x + 0];
    }
  }
  return mat;
}

void write_mat(const std::filesystem::path& path, const cv::Mat& mat, const std::vector<int>& params) {
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat, params);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write image " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write image " + path.string());
}

}  // namespace

DecodedImage read_image(const std::filesystem::path& path) {
  cv::Mat mat;
  try {
    mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw IoError("cannot decode image " + path.string() + ": " + e.what());
  }
  if (mat.empty()) throw IoError("cannot read image " + path.string());
  if (mat.depth() == CV_16U) mat.convertTo(mat, CV_8U, 1.0 / 257.0);
  if (mat.depth() != CV_8U) throw IoError("unsupported pixel depth in " + path.string());

  const int channels = mat.channels();
  DecodedImage out{Image(mat.cols, mat.rows), std::nullopt};
  if (channels == 2 || channels == 4) out.alpha = PlaneF(mat.cols, mat.rows);
  for (int y = 0; y < mat.rows; ++y) {
    const auto* in = mat.ptr<std::uint8_t>(y);
    auto row = out.rgb.row(y);
    for (int x = 0; x < mat.cols; ++x) {
      const std::uint8_t* px = in + std::size_t(x) * channels;
      if (channels <= 2) {
        row[3 * x] = row[3 * x + 1] = row[3 * x + 2] = px[0];
      } else {
        row[3 * x] = px[2];
        row[3 * x + 1] = px[1];
        row[3 * x + 2] = px[0];
      }
      if (out.alpha) out.alpha->at(x, y) = float(px[channels - 1]) / 255.0f;
    }
  }
  return out;
}

Image read_rgb(const std::filesystem::path& path) { return read_image(path).rgb; }

void write_png(const std::filesystem::path& path, const Image& img, int compression) {
  write_mat(path, to_bgr(img), {cv::IMWRITE_PNG_COMPRESSION, compression});
}

void write_png_fast(const std::filesystem::path& path, const Image& img) {
  write_mat(path, to_bgr(img),
            {cv::IMWRITE_PNG_COMPRESSION, 1, cv::IMWRITE_PNG_STRATEGY, cv::IMWRITE_PNG_STRATEGY_HUFFMAN_ONLY});
}

void write_png(const std::filesystem::path& path, const Rgba& img, int compression) {
  cv::Mat mat(img.height(), img.width(), CV_8UC4);
  for (int y = 0; y < img.height(); ++y) {
    auto* out = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      out[4 * x + 0] = img.rgb.at(x, y, 2);
      out[4 * x + 1] = img.rgb.at(x, y, 1);
      out[4 * x + 2] = img.rgb.at(x, y, 0);
      out[4 * x + 3] = std::uint8_t(std::lround(std::clamp(img.alpha.at(x, y), 0.0f, 1.0f) * 255.0f));
    }
  }
  write_mat(path, mat, {cv::IMWRITE_PNG_COMPRESSION, compression});
}

void write_jpeg(const std::filesystem::path& path, const Image& img, int quality) {
  write_mat(path, to_bgr(img), {cv::IMWRITE_JPEG_QUALITY, quality});
}

}  // namespace signforge
