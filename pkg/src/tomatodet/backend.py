"""Pluggable bridge from letterboxed pixels to raw detector head tensors.

Two kinds exist. The ``stub`` backend is a lookup table: it hashes the
letterboxed image and returns the fixture's raw logits for known images
and all-background logits (objectness -20 everywhere) for unknown ones,
which makes the whole system runnable and testable with no trained
model. The ``external`` backend adapts an ONNX artifact when
onnxruntime is installed; nothing in the test suite requires it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .decode import RawHeadOutput
from .errors import BackendConfigError, BackendLoadError, BackendRuntimeError
from .images import letterbox_image
from .labels import NUM_CLASSES

BACKGROUND_OBJECTNESS = -20.0


@dataclass(frozen=True)
class ScaleSpec:
    grid_w: int
    grid_h: int
    anchors: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class ModelDescriptor:
    model_version: str
    input_w: int
    input_h: int
    scales: tuple[ScaleSpec, ...]
    num_classes: int = NUM_CLASSES

    def validate(self) -> None:
        if self.num_classes != NUM_CLASSES:
            raise BackendConfigError(
                f"backend declares {self.num_classes} classes, expected {NUM_CLASSES}"
            )
        if not self.scales:
            raise BackendConfigError("backend must declare at least one detection scale")
        if self.input_w <= 0 or self.input_h <= 0:
            raise BackendConfigError("backend input size must be positive")


@dataclass(frozen=True)
class BackendSpec:
    kind: str  # "stub" | "external"
    path: Path | None = None

    def __post_init__(self):
        if self.kind not in ("stub", "external"):
            raise BackendConfigError(f"unknown backend kind {self.kind!r}")


def image_content_hash(letterboxed: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(letterboxed).tobytes()).hexdigest()


def _empty_logits(scale: ScaleSpec, num_classes: int) -> np.ndarray:
    logits = np.zeros((scale.grid_h, scale.grid_w, len(scale.anchors), 5 + num_classes))
    logits[..., 4] = BACKGROUND_OBJECTNESS
    return logits


class StubBackend:
    """Fixture-table backend: content hash in, stored logits out."""

    def __init__(self, fixture: dict, source: Path | None = None):
        try:
            self.descriptor = ModelDescriptor(
                model_version=fixture["model_version"],
                input_w=fixture["input_w"],
                input_h=fixture["input_h"],
                scales=tuple(
                    ScaleSpec(s["grid_w"], s["grid_h"], tuple(map(tuple, s["anchors"])))
                    for s in fixture["scales"]
                ),
                num_classes=fixture.get("num_classes", NUM_CLASSES),
            )
        except (KeyError, TypeError) as exc:
            raise BackendLoadError(f"stub fixture {source} is malformed: {exc}") from exc
        self.descriptor.validate()
        self._images = fixture.get("images", {})

    def run(self, letterboxed: np.ndarray) -> list[RawHeadOutput]:
        digest = image_content_hash(letterboxed)
        entry = self._images.get(digest)
        outputs = []
        for scale_idx, scale in enumerate(self.descriptor.scales):
            logits = _empty_logits(scale, self.descriptor.num_classes)
            if entry is not None:
                for cell in entry["cells"]:
                    if cell.get("scale", 0) != scale_idx:
                        continue
                    gy, gx, a = cell["gy"], cell["gx"], cell.get("anchor", 0)
                    logits[gy, gx, a, 0:2] = cell["txy"]
                    logits[gy, gx, a, 2:4] = cell["twh"]
                    logits[gy, gx, a, 4] = cell["objectness"]
                    logits[gy, gx, a, 5:] = cell["class_logits"]
            outputs.append(
                RawHeadOutput(scale.grid_w, scale.grid_h, [tuple(a) for a in scale.anchors], logits)
            )
        return outputs

    def expected_detections(self, digest: str) -> list[dict] | None:
        """Declared post-NMS golden detections for a known content hash."""
        entry = self._images.get(digest)
        return None if entry is None else entry.get("expected", [])

    def known_hashes(self) -> list[str]:
        return sorted(self._images)


class OnnxBackend:
    """Adapter over an ONNX model with a JSON descriptor sidecar.

    The sidecar ``<model>.json`` declares the same fields as the stub
    fixture header (model_version, input size, scales, num_classes). The
    model is fed NCHW float32 pixels in [0, 1] and must emit one output
    per scale shaped [1, grid_h, grid_w, anchors, 5 + num_classes].
    """

    def __init__(self, model_path: Path):
        sidecar = model_path.with_suffix(model_path.suffix + ".json")
        if not sidecar.is_file():
            raise BackendLoadError(f"descriptor sidecar not found: {sidecar}")
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
        self.descriptor = ModelDescriptor(
            model_version=meta["model_version"],
            input_w=meta["input_w"],
            input_h=meta["input_h"],
            scales=tuple(
                ScaleSpec(s["grid_w"], s["grid_h"], tuple(map(tuple, s["anchors"])))
                for s in meta["scales"]
            ),
            num_classes=meta.get("num_classes", NUM_CLASSES),
        )
        self.descriptor.validate()
        try:
            import onnxruntime
        except ImportError as exc:
            raise BackendLoadError("onnxruntime is required for external backends") from exc
        try:
            self._session = onnxruntime.InferenceSession(
                str(model_path), providers=["CPUExecutionProvider"]
            )
        except Exception as exc:
            raise BackendLoadError(f"could not load model {model_path}: {exc}") from exc
        self._input_name = self._session.get_inputs()[0].name

    def run(self, letterboxed: np.ndarray) -> list[RawHeadOutput]:
        x = letterboxed.astype(np.float32).transpose(2, 0, 1)[None] / 255.0
        try:
            raw = self._session.run(None, {self._input_name: x})
        except Exception as exc:
            raise BackendRuntimeError(f"onnx inference failed: {exc}") from exc
        outputs = []
        for scale, tensor in zip(self.descriptor.scales, raw):
            logits = np.asarray(tensor, dtype=np.float64).reshape(
                scale.grid_h, scale.grid_w, len(scale.anchors), 5 + self.descriptor.num_classes
            )
            outputs.append(RawHeadOutput(scale.grid_w, scale.grid_h, list(scale.anchors), logits))
        return outputs


def default_fixture_path() -> Path:
    return Path(resources.files("tomatodet").joinpath("data/stub_fixture.json"))


def load_backend(spec: BackendSpec):
    """Instantiate a ready backend; the descriptor is fully validated."""
    if spec.kind == "stub":
        path = spec.path or default_fixture_path()
        if not Path(path).is_file():
            raise BackendLoadError(f"stub fixture not found: {path}")
        try:
            fixture = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise BackendLoadError(f"stub fixture {path} is not valid JSON: {exc}") from exc
        return StubBackend(fixture, source=Path(path))

    if spec.path is None or not Path(spec.path).is_file():
        raise BackendLoadError(f"external model artifact not found: {spec.path}")
    return OnnxBackend(Path(spec.path))


def infer(backend, pixels: np.ndarray) -> list[RawHeadOutput]:
    """Letterbox to the backend's input size and run it.

    Output shapes are checked against the descriptor on every call.
    """
    d = backend.descriptor
    letterboxed, _ = letterbox_image(pixels, d.input_w, d.input_h)
    outputs = backend.run(letterboxed)
    for out in outputs:
        out.validate(d.num_classes)
    return outputs
