"""Shared fixtures: packaged stub backend, fixture images, dataset builder."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from tomatodet.backend import BackendSpec, default_fixture_path, load_backend
from tomatodet.images import read_image

DATA_DIR = Path(default_fixture_path()).parent


@pytest.fixture(scope="session")
def stub_backend():
    return load_backend(BackendSpec("stub"))


@pytest.fixture(scope="session")
def fixture_image_a() -> np.ndarray:
    return read_image(DATA_DIR / "fixture_a.png")


@pytest.fixture(scope="session")
def fixture_image_b() -> np.ndarray:
    return read_image(DATA_DIR / "fixture_b.png")


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(20260815))


def random_box(rng: np.random.Generator, min_size: float = 0.02):
    """A valid normalized box with both sides >= min_size."""
    from tomatodet.boxes import BoundingBox

    w = float(rng.uniform(min_size, 0.6))
    h = float(rng.uniform(min_size, 0.6))
    cx = float(rng.uniform(w / 2, 1 - w / 2))
    cy = float(rng.uniform(h / 2, 1 - h / 2))
    return BoundingBox(cx, cy, w, h)


def random_annotated_image(rng: np.random.Generator, w: int = 96, h: int = 80, n_boxes: int = 3):
    """A random RGB image with random labeled boxes."""
    from tomatodet.augment import AnnotatedImage

    pixels = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    boxes = [(int(rng.integers(0, 10)), random_box(rng, min_size=0.05)) for _ in range(n_boxes)]
    return AnnotatedImage(pixels, boxes)
