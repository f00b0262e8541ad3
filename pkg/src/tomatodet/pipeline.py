"""Full image-to-detections pipeline behind a sklearn-style estimator."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .backend import BackendSpec, load_backend
from .boxes import map_box_to_original
from .decode import (
    DEFAULT_CONF_THRESHOLD,
    DEFAULT_IOU_THRESHOLD,
    MIN_DECODED_SIZE,
    Detection,
    decode_head,
    non_max_suppression,
)
from .images import letterbox_image
from .validation import check_ratio, check_rgb_image


def detect_image(
    backend,
    pixels: np.ndarray,
    conf_threshold: float = DEFAULT_CONF_THRESHOLD,
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> list[Detection]:
    """Run one image through letterbox, head decode, NMS and the inverse
    coordinate map. Returned boxes are normalized to the original image."""
    check_rgb_image(pixels)
    check_ratio(conf_threshold, "conf_threshold", inclusive_low=True)
    check_ratio(iou_threshold, "iou_threshold")

    d = backend.descriptor
    letterboxed, mapping = letterbox_image(pixels, d.input_w, d.input_h)

    candidates: list[Detection] = []
    for raw in backend.run(letterboxed):
        raw.validate(d.num_classes)
        candidates.extend(decode_head(raw, conf_threshold))
    kept = non_max_suppression(candidates, iou_threshold)

    final: list[Detection] = []
    for det in kept:
        box = map_box_to_original(det.box, mapping)
        if box.w < MIN_DECODED_SIZE or box.h < MIN_DECODED_SIZE:
            continue
        final.append(Detection(det.label, det.score, box))
    return final


class DiseaseDetector(BaseEstimator):
    """Estimator wrapping backend loading and the detection pipeline.

    Parameters mirror the pipeline knobs so the detector composes with
    param search / cloning utilities; ``fit`` loads the backend and
    ``predict`` maps images to detection lists.
    """

    def __init__(
        self,
        backend_kind: str = "stub",
        backend_path=None,
        conf_threshold: float = DEFAULT_CONF_THRESHOLD,
        iou_threshold: float = DEFAULT_IOU_THRESHOLD,
    ):
        self.backend_kind = backend_kind
        self.backend_path = backend_path
        self.conf_threshold = conf_threshold
        self.iou_threshold = iou_threshold

    def fit(self, X=None, y=None):
        """Load the backend; the detector itself learns nothing."""
        self.backend_ = load_backend(BackendSpec(self.backend_kind, self.backend_path))
        return self

    def _ensure_loaded(self):
        if not hasattr(self, "backend_"):
            self.fit()
        return self.backend_

    @property
    def descriptor(self):
        return self._ensure_loaded().descriptor

    def predict_one(self, pixels: np.ndarray) -> list[Detection]:
        return detect_image(
            self._ensure_loaded(), pixels, self.conf_threshold, self.iou_threshold
        )

    def predict(self, X) -> list[list[Detection]]:
        """Detections for a sequence of RGB images."""
        return [self.predict_one(pixels) for pixels in X]
