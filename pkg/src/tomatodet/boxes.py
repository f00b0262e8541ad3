"""Axis-aligned box geometry in normalized image coordinates.

Boxes are stored center-form: (cx, cy, w, h), all as fractions of the
image dimensions. Corner-form helpers exist for geometry that is easier
to express on (x1, y1, x2, y2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class BoundingBox:
    cx: float
    cy: float
    w: float
    h: float

    @property
    def x1(self) -> float:
        return self.cx - self.w / 2

    @property
    def y1(self) -> float:
        return self.cy - self.h / 2

    @property
    def x2(self) -> float:
        return self.cx + self.w / 2

    @property
    def y2(self) -> float:
        return self.cy + self.h / 2

    @property
    def area(self) -> float:
        return self.w * self.h

    def corners(self) -> tuple[float, float, float, float]:
        return (self.x1, self.y1, self.x2, self.y2)

    @staticmethod
    def from_corners(x1: float, y1: float, x2: float, y2: float) -> "BoundingBox":
        return BoundingBox((x1 + x2) / 2, (y1 + y2) / 2, x2 - x1, y2 - y1)

    def clipped(self) -> "BoundingBox":
        """Clip the box corners to the unit square and rebuild center-form."""
        x1 = min(max(self.x1, 0.0), 1.0)
        y1 = min(max(self.y1, 0.0), 1.0)
        x2 = min(max(self.x2, 0.0), 1.0)
        y2 = min(max(self.y2, 0.0), 1.0)
        return BoundingBox.from_corners(x1, y1, x2, y2)

    def is_valid(self) -> bool:
        """True if the box satisfies the annotation invariants.

        cx, cy in [0, 1]; w, h in (0, 1]; derived corners inside the
        unit square (tiny float spill tolerated); all finite.
        """
        vals = (self.cx, self.cy, self.w, self.h)
        if not all(math.isfinite(v) for v in vals):
            return False
        if not (0.0 <= self.cx <= 1.0 and 0.0 <= self.cy <= 1.0):
            return False
        if not (0.0 < self.w <= 1.0 and 0.0 < self.h <= 1.0):
            return False
        eps = 1e-9
        return self.x1 >= -eps and self.y1 >= -eps and self.x2 <= 1.0 + eps and self.y2 <= 1.0 + eps


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes.

    Symmetric, in [0, 1]; degenerate (zero-area) inputs or disjoint
    boxes yield 0.
    """
    ix1 = max(a.x1, b.x1)
    iy1 = max(a.y1, b.y1)
    ix2 = min(a.x2, b.x2)
    iy2 = min(a.y2, b.y2)
    iw = max(0.0, ix2 - ix1)
    ih = max(0.0, iy2 - iy1)
    inter = iw * ih
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    return inter / union


@dataclass(frozen=True)
class LetterboxMapping:
    """Affine relation between a source image and its letterboxed version.

    ``scale`` is the shared resize ratio, ``pad_x``/``pad_y`` the left and
    top padding in destination pixels. Content pixel mapping:
    dst = src * scale + pad.
    """

    scale: float
    pad_x: int
    pad_y: int
    src_w: int
    src_h: int
    dst_w: int
    dst_h: int

    @property
    def new_w(self) -> int:
        return int(round(self.src_w * self.scale))

    @property
    def new_h(self) -> int:
        return int(round(self.src_h * self.scale))


# Pad value used when compositing letterboxed model inputs.
LETTERBOX_PAD_VALUE = 114


def letterbox(src_w: int, src_h: int, dst_w: int, dst_h: int) -> LetterboxMapping:
    """Aspect-preserving fit of src into dst with centered padding.

    Odd leftover pixels go to the right/bottom side.
    """
    if min(src_w, src_h, dst_w, dst_h) <= 0:
        raise ValueError("letterbox dimensions must be positive")
    scale = min(dst_w / src_w, dst_h / src_h)
    new_w = int(round(src_w * scale))
    new_h = int(round(src_h * scale))
    pad_x = (dst_w - new_w) // 2
    pad_y = (dst_h - new_h) // 2
    return LetterboxMapping(scale, pad_x, pad_y, src_w, src_h, dst_w, dst_h)


def map_box_to_letterbox(box: BoundingBox, m: LetterboxMapping) -> BoundingBox:
    """Forward-map a box from source-normalized to letterbox-normalized coords."""
    x1 = (box.x1 * m.src_w * m.scale + m.pad_x) / m.dst_w
    y1 = (box.y1 * m.src_h * m.scale + m.pad_y) / m.dst_h
    x2 = (box.x2 * m.src_w * m.scale + m.pad_x) / m.dst_w
    y2 = (box.y2 * m.src_h * m.scale + m.pad_y) / m.dst_h
    return BoundingBox.from_corners(x1, y1, x2, y2)


def map_box_to_original(box: BoundingBox, m: LetterboxMapping) -> BoundingBox:
    """Inverse-map a letterbox-normalized box into source-normalized coords.

    The result is clipped to the unit square; boxes lying fully inside
    the padded border collapse to zero width or height.
    """
    x1 = (box.x1 * m.dst_w - m.pad_x) / (m.src_w * m.scale)
    y1 = (box.y1 * m.dst_h - m.pad_y) / (m.src_h * m.scale)
    x2 = (box.x2 * m.dst_w - m.pad_x) / (m.src_w * m.scale)
    y2 = (box.y2 * m.dst_h - m.pad_y) / (m.src_h * m.scale)
    return BoundingBox.from_corners(x1, y1, x2, y2).clipped()
