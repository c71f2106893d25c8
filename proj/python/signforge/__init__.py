# Copyright (C) 2026 signforge contributors
# SPDX-License-Identifier: Apache-2.0

"""Synthetic traffic-sign dataset generation and detection evaluation."""

import json as _json

from ._core import (
    ConfigError,
    Error,
    EvaluationError,
    GenerationError,
    GeometryError,
    IntegrityError,
    IoError,
    ParseError,
    ValidationError,
    __version__,
    accepted_backgrounds,
    adjust_brightness_contrast,
    average_precision,
    composite,
    gaussian_blur,
    gaussian_blur_plane,
    gaussian_kernel,
    generate,
    import_gtsdb_gt,
    iou,
    prepare,
    select_threshold,
)
from . import _core


def evaluate(detections, truth, threshold=0.0, iou=0.7):
    """detections: (image_id, x, y, w, h, confidence); truth: (image_id, x, y, w, h, category)."""
    return _json.loads(_core.evaluate_json(list(detections), list(truth), threshold, iou))


def evaluate_files(predictions, ground_truth, iou=0.7, threshold=None, out=None):
    return _json.loads(_core.evaluate_files_json(predictions, ground_truth, iou, threshold, out))
