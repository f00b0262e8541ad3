"""Regenerate the stub-backend fixture: two synthetic images plus the
logit table and expected post-pipeline detections.

Expected scores/boxes are computed here with plain ``math`` so the
package's own decode path is never the source of its goldens. Both
images are exactly the model input size, which makes letterboxing the
identity map and the content hash a straight hash of the decoded
pixels.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from tomatodet.backend import image_content_hash  # noqa: E402
from tomatodet.images import read_image, write_image  # noqa: E402

SIZE = 640
GRID = 8
ANCHOR = (0.2, 0.1)
NUM_CLASSES = 10
DATA = ROOT / "src" / "tomatodet" / "data"


def sigmoid(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


def make_leaf_image(blotches: list[tuple[float, float, float, float, tuple[int, int, int]]]) -> np.ndarray:
    """A green gradient 'leaf' with colored blotches at normalized boxes."""
    y, x = np.mgrid[0:SIZE, 0:SIZE]
    img = np.stack(
        [
            30 + 40 * x / SIZE,
            120 + 80 * y / SIZE,
            30 + 20 * (x + y) / (2 * SIZE),
        ],
        axis=-1,
    ).astype(np.uint8)
    for cx, cy, w, h, color in blotches:
        x1, x2 = int((cx - w / 2) * SIZE), int((cx + w / 2) * SIZE)
        y1, y2 = int((cy - h / 2) * SIZE), int((cy + h / 2) * SIZE)
        img[y1:y2, x1:x2] = color
    return img


def cell_detection(gx: int, gy: int, objectness: float, class_id: int, class_logit: float) -> tuple[dict, dict]:
    """Zero-offset cell plus its analytically expected decoded detection."""
    class_logits = [-6.0] * NUM_CLASSES
    class_logits[class_id] = class_logit
    cell = {
        "scale": 0,
        "gx": gx,
        "gy": gy,
        "anchor": 0,
        "txy": [0.0, 0.0],
        "twh": [0.0, 0.0],
        "objectness": objectness,
        "class_logits": class_logits,
    }
    expected = {
        "class_id": class_id,
        "score": sigmoid(objectness) * sigmoid(class_logit),
        "box": {
            "cx": (0.5 + gx) / GRID,
            "cy": (0.5 + gy) / GRID,
            "w": ANCHOR[0],
            "h": ANCHOR[1],
        },
    }
    return cell, expected


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)

    # image A: one grey-mold finding
    a_cell, a_expected = cell_detection(gx=3, gy=4, objectness=4.0, class_id=1, class_logit=3.0)
    img_a = make_leaf_image([(a_expected["box"]["cx"], a_expected["box"]["cy"], 0.2, 0.1, (120, 110, 100))])
    write_image(DATA / "fixture_a.png", img_a)

    # image B: two findings in different classes, far apart
    b1_cell, b1_expected = cell_detection(gx=1, gy=1, objectness=3.0, class_id=2, class_logit=2.5)
    b2_cell, b2_expected = cell_detection(gx=6, gy=6, objectness=2.0, class_id=8, class_logit=2.0)
    img_b = make_leaf_image(
        [
            (b1_expected["box"]["cx"], b1_expected["box"]["cy"], 0.2, 0.1, (150, 90, 60)),
            (b2_expected["box"]["cx"], b2_expected["box"]["cy"], 0.2, 0.1, (200, 190, 90)),
        ]
    )
    write_image(DATA / "fixture_b.png", img_b)

    hash_a = image_content_hash(read_image(DATA / "fixture_a.png"))
    hash_b = image_content_hash(read_image(DATA / "fixture_b.png"))

    fixture = {
        "model_version": "stub-1",
        "input_w": SIZE,
        "input_h": SIZE,
        "num_classes": NUM_CLASSES,
        "scales": [{"grid_w": GRID, "grid_h": GRID, "anchors": [list(ANCHOR)]}],
        "images": {
            hash_a: {"label": "fixture_a.png", "cells": [a_cell], "expected": [a_expected]},
            hash_b: {
                "label": "fixture_b.png",
                "cells": [b1_cell, b2_cell],
                # descending score order, the pipeline's output order
                "expected": sorted([b1_expected, b2_expected], key=lambda e: -e["score"]),
            },
        },
    }
    out = DATA / "stub_fixture.json"
    out.write_text(json.dumps(fixture, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    for name, digest in (("fixture_a.png", hash_a), ("fixture_b.png", hash_b)):
        print(f"  {name}: {digest}")


if __name__ == "__main__":
    main()
