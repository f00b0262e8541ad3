"""Annotation-format I/O, dataset statistics and splits.

Layout: sibling ``images/`` and ``labels/`` directories with matching
basenames. Label files hold one object per line, ``class_id cx cy w h``
with normalized decimals; prediction files insert a score column after
the class id. Canonical numeric formatting is 6 decimal places.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .augment import rng_from_seed
from .boxes import BoundingBox
from .decode import Detection
from .errors import AnnotationParseError, ContractError
from .labels import NUM_CLASSES, by_id

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


def _parse_line(line: str, path, lineno: int, with_score: bool):
    parts = line.split()
    want = 6 if with_score else 5
    if len(parts) != want:
        raise AnnotationParseError(
            f"expected {want} fields, got {len(parts)}", path=path, line=lineno
        )
    try:
        class_id = int(parts[0])
        values = [float(p) for p in parts[1:]]
    except ValueError as exc:
        raise AnnotationParseError(str(exc), path=path, line=lineno) from None
    if not 0 <= class_id < NUM_CLASSES:
        raise AnnotationParseError(f"unknown class id {class_id}", path=path, line=lineno)

    score = None
    if with_score:
        score = values.pop(0)
        if not 0.0 < score <= 1.0:
            raise AnnotationParseError(f"score {score} outside (0, 1]", path=path, line=lineno)
    cx, cy, w, h = values
    box = BoundingBox(cx, cy, w, h)
    if not box.is_valid():
        raise AnnotationParseError(
            f"box values out of range: cx={cx} cy={cy} w={w} h={h}", path=path, line=lineno
        )
    return class_id, score, box


def _parse_file(path: Path, with_score: bool):
    path = Path(path)
    if not path.is_file():
        raise AnnotationParseError("file not found", path=path)
    rows = []
    lines = path.read_text(encoding="utf-8").split("\n")
    # trailing blank lines are tolerated; blank lines elsewhere are not
    while lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, start=1):
        rows.append(_parse_line(line, path, lineno, with_score))
    return rows


def parse_annotations(path: Path) -> list[tuple[int, BoundingBox]]:
    """Strictly parse one ground-truth label file."""
    return [(class_id, box) for class_id, _, box in _parse_file(path, with_score=False)]


def parse_predictions(path: Path) -> list[Detection]:
    """Parse a prediction file (``class_id score cx cy w h`` per line)."""
    return [
        Detection(by_id(class_id), score, box)
        for class_id, score, box in _parse_file(path, with_score=True)
    ]


def serialize_annotations(boxes: list[tuple[int, BoundingBox]]) -> str:
    return "".join(
        f"{class_id} {b.cx:.6f} {b.cy:.6f} {b.w:.6f} {b.h:.6f}\n" for class_id, b in boxes
    )


def serialize_predictions(dets: list[Detection]) -> str:
    return "".join(
        f"{d.label.id} {d.score:.6f} {d.box.cx:.6f} {d.box.cy:.6f} {d.box.w:.6f} {d.box.h:.6f}\n"
        for d in dets
    )


@dataclass
class DatasetStats:
    per_class: dict[int, int]
    image_count: int
    object_count: int
    imbalance_ratio: float  # max class count / min nonzero class count
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "image_count": self.image_count,
            "object_count": self.object_count,
            "imbalance_ratio": self.imbalance_ratio,
            "per_class": [
                {"class_id": i, "slug": by_id(i).slug, "count": self.per_class.get(i, 0)}
                for i in range(NUM_CLASSES)
            ],
            "warnings": list(self.warnings),
        }


def list_images(root: Path) -> list[Path]:
    images_dir = Path(root) / "images"
    if not images_dir.is_dir():
        raise ContractError(f"no images/ directory under {root}")
    return sorted(p for p in images_dir.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)


def label_path_for(root: Path, image_path: Path) -> Path:
    return Path(root) / "labels" / (image_path.stem + ".txt")


def compute_stats(root: Path) -> DatasetStats:
    """Exact per-class object counts over the dataset.

    Traversal is in sorted path order. Annotation files without a
    matching image are reported as warnings and excluded from counts.
    """
    root = Path(root)
    images = list_images(root)
    image_stems = {p.stem for p in images}

    per_class = {i: 0 for i in range(NUM_CLASSES)}
    warnings = []
    labels_dir = root / "labels"
    if labels_dir.is_dir():
        for label_file in sorted(labels_dir.glob("*.txt")):
            if label_file.stem not in image_stems:
                warnings.append(f"orphan annotation (no matching image): {label_file}")

    for image_path in images:
        label_file = label_path_for(root, image_path)
        if not label_file.is_file():
            continue  # image with no objects annotated
        for class_id, _ in parse_annotations(label_file):
            per_class[class_id] += 1

    nonzero = [c for c in per_class.values() if c > 0]
    imbalance = max(nonzero) / min(nonzero) if nonzero else 0.0
    return DatasetStats(
        per_class=per_class,
        image_count=len(images),
        object_count=sum(per_class.values()),
        imbalance_ratio=imbalance,
        warnings=warnings,
    )


def split_dataset(
    root: Path, ratios: tuple[float, float, float], seed: int
) -> dict[str, list[Path]]:
    """Deterministic seeded train/val/test split of the image list.

    Bucket sizes are floor(n * ratio); leftover images go to train, then
    val, then test. Manifests come back sorted.
    """
    if len(ratios) != 3 or any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ContractError(f"ratios must be 3 non-negative values summing to 1, got {ratios}")
    images = list_images(root)
    order = rng_from_seed(seed).permutation(len(images))
    shuffled = [images[i] for i in order]

    n = len(images)
    sizes = [int(n * r) for r in ratios]
    leftover = n - sum(sizes)
    for i in range(leftover):
        sizes[i % 3] += 1

    names = ("train", "val", "test")
    manifests: dict[str, list[Path]] = {}
    start = 0
    for name, size in zip(names, sizes):
        manifests[name] = sorted(shuffled[start : start + size])
        start += size
    return manifests


def write_manifests(manifests: dict[str, list[Path]], out_dir: Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, paths in manifests.items():
        (out_dir / f"{name}.txt").write_text(
            "".join(f"{p}\n" for p in paths), encoding="utf-8"
        )
