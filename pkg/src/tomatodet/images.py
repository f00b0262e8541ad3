"""Image bytes/file I/O and detection overlay drawing.

Everything inside the package works on H x W x 3 RGB uint8 arrays; the
BGR flip happens only here at the OpenCV boundary.
"""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np

from .boxes import LETTERBOX_PAD_VALUE, LetterboxMapping, letterbox
from .decode import Detection
from .errors import ImageDecodeError

# one fixed color per class id, RGB
CLASS_COLORS = (
    (128, 128, 128),  # back
    (214, 39, 40),    # gmold
    (255, 127, 14),   # canker
    (44, 160, 44),    # lmold
    (148, 103, 189),  # plague
    (140, 86, 75),    # lminer
    (227, 119, 194),  # wfly
    (31, 119, 180),   # lowtemp
    (188, 189, 34),   # nutrex
    (23, 190, 207),   # pmildew
)


def decode_image_bytes(data: bytes) -> np.ndarray:
    buf = np.frombuffer(data, dtype=np.uint8)
    bgr = cv2.imdecode(buf, cv2.IMREAD_COLOR)
    if bgr is None:
        raise ImageDecodeError("bytes are not a decodable JPEG/PNG image")
    return cv2.cvtColor(bgr, cv2.COLOR_BGR2RGB)


def read_image(path: Path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise ImageDecodeError(f"image file not found: {path}")
    return decode_image_bytes(path.read_bytes())


def write_image(path: Path, pixels: np.ndarray) -> None:
    ok = cv2.imwrite(str(path), cv2.cvtColor(pixels, cv2.COLOR_RGB2BGR))
    if not ok:
        raise ImageDecodeError(f"could not write image to {path}")


def letterbox_image(pixels: np.ndarray, dst_w: int, dst_h: int) -> tuple[np.ndarray, LetterboxMapping]:
    """Resize-with-padding onto a mid-gray canvas of the model input size."""
    src_h, src_w = pixels.shape[:2]
    m = letterbox(src_w, src_h, dst_w, dst_h)
    if (src_w, src_h) == (dst_w, dst_h):
        return pixels.copy(), m
    resized = cv2.resize(pixels, (m.new_w, m.new_h), interpolation=cv2.INTER_LINEAR)
    canvas = np.full((dst_h, dst_w, 3), LETTERBOX_PAD_VALUE, dtype=np.uint8)
    canvas[m.pad_y : m.pad_y + m.new_h, m.pad_x : m.pad_x + m.new_w] = resized
    return canvas, m


def draw_overlay(pixels: np.ndarray, detections: list[Detection]) -> np.ndarray:
    """Copy of the image with 2 px class-colored boxes and slug/score labels."""
    out = pixels.copy()
    h, w = out.shape[:2]
    for det in detections:
        color = CLASS_COLORS[det.label.id]
        x1 = int(round(det.box.x1 * w))
        y1 = int(round(det.box.y1 * h))
        x2 = int(round(det.box.x2 * w))
        y2 = int(round(det.box.y2 * h))
        cv2.rectangle(out, (x1, y1), (x2, y2), color, 2)
        text = f"{det.label.slug} {det.score:.2f}"
        ty = y1 - 4 if y1 >= 14 else y2 + 14
        cv2.putText(out, text, (x1, ty), cv2.FONT_HERSHEY_SIMPLEX, 0.45, color, 1, cv2.LINE_AA)
    return out
