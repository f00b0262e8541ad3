"""Box geometry: IoU against a rasterized counting oracle, letterbox maps."""

from __future__ import annotations

import numpy as np
import pytest

from tomatodet.boxes import (
    BoundingBox,
    LetterboxMapping,
    iou,
    letterbox,
    map_box_to_letterbox,
    map_box_to_original,
)

GRID = 200  # rasterization subdivisions per unit axis


def snap_box(box: BoundingBox) -> BoundingBox:
    """Snap corners to the raster grid so counting cells is exact."""
    x1 = round(box.x1 * GRID)
    y1 = round(box.y1 * GRID)
    x2 = round(box.x2 * GRID)
    y2 = round(box.y2 * GRID)
    if x2 <= x1:
        x2 = x1 + 1
    if y2 <= y1:
        y2 = y1 + 1
    return BoundingBox.from_corners(x1 / GRID, y1 / GRID, min(x2 / GRID, 1.0), min(y2 / GRID, 1.0))


def rasterized_iou(a: BoundingBox, b: BoundingBox) -> float:
    """Count raster cells covered by each box; exact for grid-snapped boxes."""
    def mask(box: BoundingBox) -> np.ndarray:
        m = np.zeros((GRID, GRID), dtype=bool)
        x1 = round(box.x1 * GRID)
        y1 = round(box.y1 * GRID)
        x2 = round(box.x2 * GRID)
        y2 = round(box.y2 * GRID)
        m[y1:y2, x1:x2] = True
        return m

    ma, mb = mask(a), mask(b)
    inter = np.logical_and(ma, mb).sum()
    union = np.logical_or(ma, mb).sum()
    return float(inter) / float(union) if union else 0.0


def test_iou_matches_rasterized_oracle_on_1000_pairs(rng):
    from conftest import random_box

    worst = 0.0
    for _ in range(1000):
        a = snap_box(random_box(rng))
        b = snap_box(random_box(rng))
        expected = rasterized_iou(a, b)
        got = iou(a, b)
        worst = max(worst, abs(got - expected))
    assert worst < 1e-6, f"max IoU error {worst}"


def test_iou_identity_and_disjoint():
    a = BoundingBox(0.3, 0.3, 0.2, 0.2)
    assert iou(a, a) == pytest.approx(1.0)
    b = BoundingBox(0.8, 0.8, 0.1, 0.1)
    assert iou(a, b) == 0.0


def test_iou_hand_computed_quarter_overlap():
    # two 0.2x0.2 squares offset by half their side in both axes
    a = BoundingBox(0.3, 0.3, 0.2, 0.2)
    b = BoundingBox(0.4, 0.4, 0.2, 0.2)
    inter = 0.1 * 0.1
    union = 2 * 0.04 - inter
    assert iou(a, b) == pytest.approx(inter / union)


def test_iou_symmetry(rng):
    from conftest import random_box

    for _ in range(100):
        a, b = random_box(rng), random_box(rng)
        assert iou(a, b) == pytest.approx(iou(b, a), abs=1e-12)


def test_box_corners_and_validity():
    box = BoundingBox(0.5, 0.5, 0.2, 0.4)
    assert box.x1 == pytest.approx(0.4)
    assert box.y2 == pytest.approx(0.7)
    assert box.is_valid()
    assert not BoundingBox(0.0, 0.5, 0.2, 0.2).is_valid()  # corner spills past 0
    assert not BoundingBox(0.5, 0.5, 0.0, 0.2).is_valid()  # zero width


def test_box_clipping_restores_invariants():
    box = BoundingBox(0.05, 0.5, 0.3, 0.2).clipped()
    assert box.x1 >= 0.0 and box.is_valid()
    assert box.x2 == pytest.approx(0.2)


def test_letterbox_square_into_square_is_identity_scale():
    m = letterbox(640, 640, 640, 640)
    assert m.scale == pytest.approx(1.0)
    assert (m.pad_x, m.pad_y) == (0, 0)


def test_letterbox_wide_image_pads_top_bottom():
    m = letterbox(1280, 720, 640, 640)
    assert m.scale == pytest.approx(0.5)
    assert m.new_w == 640 and m.new_h == 360
    assert m.pad_x == 0
    assert m.pad_y == 140  # (640 - 360) / 2


def test_letterbox_odd_leftover_goes_right_bottom():
    # 100x98 -> 50x50: scaled height 49, one leftover pad pixel
    m = letterbox(100, 98, 50, 50)
    assert m.new_h == 49
    assert m.pad_y == 0  # floor((50-49)/2) = 0: extra pixel sits at the bottom
    assert m.new_w == 50 and m.pad_x == 0


def test_box_mapping_round_trip(rng):
    from conftest import random_box

    m = letterbox(1024, 768, 640, 640)
    for _ in range(200):
        box = random_box(rng)
        there = map_box_to_letterbox(box, m)
        back = map_box_to_original(there, m)
        assert back.cx == pytest.approx(box.cx, abs=1e-9)
        assert back.cy == pytest.approx(box.cy, abs=1e-9)
        assert back.w == pytest.approx(box.w, abs=1e-9)
        assert back.h == pytest.approx(box.h, abs=1e-9)


def test_box_mapping_centers_land_inside_content_region():
    m = letterbox(1280, 720, 640, 640)
    box = BoundingBox(0.5, 0.5, 0.2, 0.2)
    mapped = map_box_to_letterbox(box, m)
    # content occupies rows 140..500 of the 640 canvas
    assert 140 / 640 < mapped.cy < 500 / 640


def test_map_to_original_clips_padding_spill():
    m = letterbox(1280, 720, 640, 640)
    # a box hugging the canvas top edge pokes into the padding band
    spilled = BoundingBox(0.5, 140 / 640, 0.2, 0.1)
    back = map_box_to_original(spilled, m)
    assert back.y1 >= 0.0
    assert back.is_valid()


def test_letterbox_mapping_fields_consistent():
    m = letterbox(320, 240, 640, 640)
    assert isinstance(m, LetterboxMapping)
    assert m.scale == pytest.approx(2.0)
    assert m.new_w == 640 and m.new_h == 480
    assert m.pad_y == 80
