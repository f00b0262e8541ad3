"""Decode raw one-stage detector head tensors into detections.

Decoding follows the v5-family convention, the single supported one:

    center = (2 * sigmoid(txy) - 0.5 + cell_index) / grid
    size   = anchor * (2 * sigmoid(twh)) ** 2
    score  = sigmoid(objectness) * max_c sigmoid(class_c)

All tensors are pre-activation logits laid out [grid_h, grid_w, anchors,
5 + num_classes] with the last axis ordered (tx, ty, tw, th, objectness,
class scores).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boxes import BoundingBox, iou
from .errors import ShapeError
from .labels import NUM_CLASSES, ClassLabel, by_id

# Decoded boxes thinner than this after clipping are discarded.
MIN_DECODED_SIZE = 1e-3

DEFAULT_CONF_THRESHOLD = 0.25
DEFAULT_IOU_THRESHOLD = 0.45


@dataclass(frozen=True)
class Detection:
    label: ClassLabel
    score: float
    box: BoundingBox


@dataclass
class RawHeadOutput:
    """One detection scale worth of raw logits."""

    grid_w: int
    grid_h: int
    anchors: list[tuple[float, float]]
    logits: np.ndarray = field(repr=False)

    def validate(self, num_classes: int = NUM_CLASSES) -> None:
        expected = (self.grid_h, self.grid_w, len(self.anchors), 5 + num_classes)
        if self.logits.shape != expected:
            raise ShapeError(
                f"logit tensor shape {self.logits.shape} does not match "
                f"declared layout {expected}"
            )


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))


def decode_head(raw: RawHeadOutput, conf_threshold: float = DEFAULT_CONF_THRESHOLD) -> list[Detection]:
    """Decode one scale into pre-NMS detections above ``conf_threshold``.

    Boxes are clipped to the unit square; near-degenerate clipped boxes
    are dropped. Class ties break toward the lowest class id (argmax).
    """
    if not 0.0 <= conf_threshold < 1.0:
        raise ValueError(f"conf_threshold must be in [0, 1), got {conf_threshold}")
    raw.validate()

    logits = np.asarray(raw.logits, dtype=np.float64)
    txy = sigmoid(logits[..., 0:2])
    twh = sigmoid(logits[..., 2:4])
    obj = sigmoid(logits[..., 4])
    cls = sigmoid(logits[..., 5:])

    gx = np.arange(raw.grid_w, dtype=np.float64)
    gy = np.arange(raw.grid_h, dtype=np.float64)
    # cell index broadcast over [grid_h, grid_w, anchors]
    cx = (2.0 * txy[..., 0] - 0.5 + gx[None, :, None]) / raw.grid_w
    cy = (2.0 * txy[..., 1] - 0.5 + gy[:, None, None]) / raw.grid_h

    anchors = np.asarray(raw.anchors, dtype=np.float64)  # [A, 2]
    bw = anchors[None, None, :, 0] * (2.0 * twh[..., 0]) ** 2
    bh = anchors[None, None, :, 1] * (2.0 * twh[..., 1]) ** 2

    best_cls = np.argmax(cls, axis=-1)
    best_prob = np.take_along_axis(cls, best_cls[..., None], axis=-1)[..., 0]
    score = obj * best_prob

    keep = score > conf_threshold
    dets: list[Detection] = []
    for j, i, a in zip(*np.nonzero(keep)):
        box = BoundingBox(cx[j, i, a], cy[j, i, a], bw[j, i, a], bh[j, i, a]).clipped()
        if box.w < MIN_DECODED_SIZE or box.h < MIN_DECODED_SIZE:
            continue
        dets.append(Detection(by_id(int(best_cls[j, i, a])), float(score[j, i, a]), box))
    return dets


def non_max_suppression(dets: list[Detection], iou_threshold: float = DEFAULT_IOU_THRESHOLD) -> list[Detection]:
    """Per-class greedy suppression.

    Repeatedly keeps the highest-score remaining detection of each class
    and discards same-class detections overlapping it with IoU strictly
    above the threshold. Boxes of different classes never interact.
    Output is sorted by descending score; score ties keep input order.
    """
    if not 0.0 < iou_threshold < 1.0:
        raise ValueError(f"iou_threshold must be in (0, 1), got {iou_threshold}")

    by_class: dict[int, list[tuple[int, Detection]]] = {}
    for idx, det in enumerate(dets):
        by_class.setdefault(det.label.id, []).append((idx, det))

    kept: list[tuple[int, Detection]] = []
    for class_dets in by_class.values():
        remaining = sorted(class_dets, key=lambda t: (-t[1].score, t[0]))
        while remaining:
            best = remaining.pop(0)
            kept.append(best)
            remaining = [t for t in remaining if iou(best[1].box, t[1].box) <= iou_threshold]

    kept.sort(key=lambda t: (-t[1].score, t[0]))
    return [det for _, det in kept]
