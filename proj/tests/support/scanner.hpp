// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

// Post-hoc checker for emitted samples. Boxes come from the serialized COCO
// document (read with mini_json), visible pixels from the render's coverage map.

#pragma once

#include <string>
#include <vector>

#include "signforge/synthesizer.hpp"

namespace signforge::testing {

struct ScanBox {
  long long x, y, w, h;
};

/// Boxes of every annotation of image `image_id`, in document order.
std::vector<ScanBox> boxes_from_coco(const std::string& coco_json, long long image_id);

/// Returns one message per violated invariant; empty means the sample is sound.
std::vector<std::string> scan_sample(const std::vector<ScanBox>& boxes, int width, int height,
                                     const CoverageMap& coverage, int tolerance_px = 2);

}  // namespace signforge::testing
