"""Seeded augmentations with correct box label transforms.

Techniques: mosaic (4-image quadrant composite), mixup (pixel blend with
merged labels), one composed affine (scale + translation + rotation) and
PCA color perturbation. Every operation is a pure function of its inputs
and the supplied generator state: same seed, same bytes out.

Randomness comes from numpy's PCG64 generator so seeded outputs are
reproducible; sampling is always injectable (``pivot``, ``lam``,
``params``, ``alphas``) for golden tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import cv2
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .boxes import BoundingBox
from .errors import ContractError
from .labels import NUM_CLASSES
from .validation import check_rgb_image

Box = tuple[int, BoundingBox]  # (class id, box)


@dataclass
class AnnotatedImage:
    """RGB uint8 pixels plus normalized ground-truth boxes."""

    pixels: np.ndarray
    boxes: list[Box] = field(default_factory=list)

    def __post_init__(self):
        check_rgb_image(self.pixels)
        for class_id, box in self.boxes:
            if not 0 <= class_id < NUM_CLASSES:
                raise ContractError(f"class id {class_id} out of range")
            if not box.is_valid():
                raise ContractError(f"invalid box {box}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class AugmentationConfig:
    seed: int = 0
    scale_range: tuple[float, float] = (0.5, 1.5)
    translate_max: float = 0.1
    rotate_max: float = 10.0
    mixup_alpha: float = 8.0
    pca_sigma: float = 0.1
    min_box_size: float = 1e-3
    mosaic_size: int = 640

    def __post_init__(self):
        if self.scale_range[0] <= 0 or self.scale_range[1] < self.scale_range[0]:
            raise ContractError(f"bad scale_range {self.scale_range}")
        if not 0 <= self.translate_max < 1:
            raise ContractError(f"bad translate_max {self.translate_max}")
        if not 0 <= self.rotate_max < 180:
            raise ContractError(f"bad rotate_max {self.rotate_max}")
        if self.mosaic_size < 4:
            raise ContractError(f"mosaic_size too small: {self.mosaic_size}")


def rng_from_seed(seed: int) -> np.random.Generator:
    """The package-wide generator: PCG64 seeded with a 64-bit integer."""
    return np.random.Generator(np.random.PCG64(seed))


BORDER_FILL = (114, 114, 114)


def _keep_box(box: BoundingBox, min_size: float) -> bool:
    return box.w >= min_size and box.h >= min_size


# ---------------------------------------------------------------------------
# mosaic


def mosaic(
    imgs: list[AnnotatedImage],
    cfg: AugmentationConfig,
    rng: np.random.Generator,
    pivot: tuple[int, int] | None = None,
) -> AnnotatedImage:
    """Composite four images into one canvas split at a random pivot.

    The pivot is sampled uniformly on the central half of the canvas and
    splits it into four quadrants filled in order TL, TR, BL, BR. Each
    input is resized (non-aspect-preserving) to exactly fill its
    quadrant; its boxes are remapped into canvas coordinates, clipped,
    and dropped when thinner than ``cfg.min_box_size``.
    """
    if len(imgs) != 4:
        raise ContractError(f"mosaic requires exactly 4 images, got {len(imgs)}")
    channels = {im.pixels.shape[2] for im in imgs}
    if len(channels) != 1:
        raise ContractError("mosaic inputs must share one channel count")

    size = cfg.mosaic_size
    if pivot is None:
        lo, hi = size // 4, 3 * size // 4
        pivot = (int(rng.integers(lo, hi + 1)), int(rng.integers(lo, hi + 1)))
    px, py = pivot
    if not (0 < px < size and 0 < py < size):
        raise ContractError(f"pivot {pivot} outside canvas interior")

    canvas = np.zeros((size, size, 3), dtype=np.uint8)
    quadrants = (
        (0, 0, px, py),
        (px, 0, size - px, py),
        (0, py, px, size - py),
        (px, py, size - px, size - py),
    )

    out_boxes: list[Box] = []
    for img, (ox, oy, qw, qh) in zip(imgs, quadrants):
        canvas[oy : oy + qh, ox : ox + qw] = cv2.resize(
            img.pixels, (qw, qh), interpolation=cv2.INTER_LINEAR
        )
        for class_id, box in img.boxes:
            mapped = BoundingBox.from_corners(
                (ox + box.x1 * qw) / size,
                (oy + box.y1 * qh) / size,
                (ox + box.x2 * qw) / size,
                (oy + box.y2 * qh) / size,
            ).clipped()
            if _keep_box(mapped, cfg.min_box_size):
                out_boxes.append((class_id, mapped))

    return AnnotatedImage(canvas, out_boxes)


# ---------------------------------------------------------------------------
# mixup


def mixup(
    a: AnnotatedImage,
    b: AnnotatedImage,
    cfg: AugmentationConfig,
    rng: np.random.Generator,
    lam: float | None = None,
) -> AnnotatedImage:
    """Blend two equal-sized images: lam * a + (1 - lam) * b.

    lam ~ Beta(mixup_alpha, mixup_alpha) unless given. Pixels round to the
    nearest integer (ties to even); box lists concatenate at full weight.
    """
    if a.pixels.shape != b.pixels.shape:
        raise ContractError(
            f"mixup dimension mismatch: {a.pixels.shape} vs {b.pixels.shape}"
        )
    if lam is None:
        lam = float(rng.beta(cfg.mixup_alpha, cfg.mixup_alpha))
    if not 0.0 <= lam <= 1.0:
        raise ContractError(f"lam must be in [0, 1], got {lam}")

    blended = lam * a.pixels.astype(np.float64) + (1.0 - lam) * b.pixels.astype(np.float64)
    pixels = np.clip(np.rint(blended), 0, 255).astype(np.uint8)
    return AnnotatedImage(pixels, list(a.boxes) + list(b.boxes))


# ---------------------------------------------------------------------------
# composed affine: scale + translation + rotation


@dataclass(frozen=True)
class AffineParams:
    scale: float = 1.0
    translate_x: float = 0.0  # fractions of image width/height
    translate_y: float = 0.0
    angle_deg: float = 0.0  # positive = counterclockwise on screen

    @property
    def is_identity(self) -> bool:
        return (
            self.scale == 1.0
            and self.translate_x == 0.0
            and self.translate_y == 0.0
            and self.angle_deg == 0.0
        )


def sample_affine_params(cfg: AugmentationConfig, rng: np.random.Generator) -> AffineParams:
    return AffineParams(
        scale=float(rng.uniform(*cfg.scale_range)),
        translate_x=float(rng.uniform(-cfg.translate_max, cfg.translate_max)),
        translate_y=float(rng.uniform(-cfg.translate_max, cfg.translate_max)),
        angle_deg=float(rng.uniform(-cfg.rotate_max, cfg.rotate_max)),
    )


def affine_matrix(params: AffineParams, width: int, height: int) -> np.ndarray:
    """2x3 pixel-space matrix rotating/scaling about the image center."""
    m = cv2.getRotationMatrix2D(((width - 1) / 2, (height - 1) / 2), params.angle_deg, params.scale)
    m[0, 2] += params.translate_x * width
    m[1, 2] += params.translate_y * height
    return m


def affine_augment(
    img: AnnotatedImage,
    cfg: AugmentationConfig,
    rng: np.random.Generator,
    params: AffineParams | None = None,
) -> AnnotatedImage:
    """Apply one composed affine map about the image center.

    Boxes are transformed by mapping their four corners and taking the
    axis-aligned hull, then clipped; boxes thinner than
    ``cfg.min_box_size`` are dropped. Identity parameters return the
    input pixels untouched (no resampling).
    """
    if params is None:
        params = sample_affine_params(cfg, rng)

    if params.is_identity:
        return AnnotatedImage(img.pixels.copy(), list(img.boxes))

    h, w = img.pixels.shape[:2]
    m = affine_matrix(params, w, h)
    pixels = cv2.warpAffine(
        img.pixels, m, (w, h), flags=cv2.INTER_LINEAR,
        borderMode=cv2.BORDER_CONSTANT, borderValue=BORDER_FILL,
    )

    out_boxes: list[Box] = []
    for class_id, box in img.boxes:
        corners = np.array(
            [
                [box.x1 * w, box.y1 * h],
                [box.x2 * w, box.y1 * h],
                [box.x2 * w, box.y2 * h],
                [box.x1 * w, box.y2 * h],
            ]
        )
        mapped = corners @ m[:, :2].T + m[:, 2]
        hull = BoundingBox.from_corners(
            mapped[:, 0].min() / w,
            mapped[:, 1].min() / h,
            mapped[:, 0].max() / w,
            mapped[:, 1].max() / h,
        ).clipped()
        if _keep_box(hull, cfg.min_box_size):
            out_boxes.append((class_id, hull))

    return AnnotatedImage(pixels, out_boxes)


# ---------------------------------------------------------------------------
# PCA color


def rgb_covariance_eigen(pixels: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Population covariance of RGB values in [0, 1] plus its eigenpairs.

    Returns (cov 3x3, eigenvalues ascending, eigenvectors as columns).
    """
    flat = pixels.reshape(-1, 3).astype(np.float64) / 255.0
    centered = flat - flat.mean(axis=0)
    cov = centered.T @ centered / flat.shape[0]
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    return cov, eigenvalues, eigenvectors


def pca_color_augment(
    img: AnnotatedImage,
    cfg: AugmentationConfig,
    rng: np.random.Generator,
    alphas: np.ndarray | None = None,
) -> AnnotatedImage:
    """Shift every pixel along the image's RGB principal components.

    The offset added (in [0, 1] intensity space) is sum_i alpha_i *
    lambda_i * e_i with alpha ~ Normal(0, pca_sigma). Boxes never change.
    """
    if img.pixels.size == 0:
        raise ContractError("pca_color_augment needs a nonempty image")
    if alphas is None:
        alphas = rng.normal(0.0, cfg.pca_sigma, size=3)
    alphas = np.asarray(alphas, dtype=np.float64)

    _, eigenvalues, eigenvectors = rgb_covariance_eigen(img.pixels)
    delta = eigenvectors @ (alphas * eigenvalues)
    if not np.any(delta):
        return AnnotatedImage(img.pixels.copy(), list(img.boxes))

    shifted = img.pixels.astype(np.float64) / 255.0 + delta
    pixels = np.rint(np.clip(shifted, 0.0, 1.0) * 255.0).astype(np.uint8)
    return AnnotatedImage(pixels, list(img.boxes))


# ---------------------------------------------------------------------------
# sklearn-style wrappers

class _SeededAugmenter(BaseEstimator, TransformerMixin):
    """Base for augmenter transformers; builds the config from params."""

    def _config(self) -> AugmentationConfig:
        return AugmentationConfig(**{
            k: v for k, v in self.get_params().items()
            if k in AugmentationConfig.__dataclass_fields__
        })

    def fit(self, X, y=None):
        return self


class MosaicAugmenter(_SeededAugmenter):
    """Transformer consuming groups of four annotated images.

    ``transform`` takes a sequence whose length is a multiple of four and
    emits one composite per consecutive group.
    """

    def __init__(self, seed=0, mosaic_size=640, min_box_size=1e-3):
        self.seed = seed
        self.mosaic_size = mosaic_size
        self.min_box_size = min_box_size

    def transform(self, X):
        if len(X) % 4 != 0:
            raise ContractError(f"mosaic input length must be a multiple of 4, got {len(X)}")
        cfg, rng = self._config(), rng_from_seed(self.seed)
        return [mosaic(list(X[i : i + 4]), cfg, rng) for i in range(0, len(X), 4)]


class MixupAugmenter(_SeededAugmenter):
    """Transformer blending consecutive pairs of annotated images."""

    def __init__(self, seed=0, mixup_alpha=8.0, min_box_size=1e-3):
        self.seed = seed
        self.mixup_alpha = mixup_alpha
        self.min_box_size = min_box_size

    def transform(self, X):
        if len(X) % 2 != 0:
            raise ContractError(f"mixup input length must be even, got {len(X)}")
        cfg, rng = self._config(), rng_from_seed(self.seed)
        return [mixup(X[i], X[i + 1], cfg, rng) for i in range(0, len(X), 2)]


class AffineAugmenter(_SeededAugmenter):
    def __init__(self, seed=0, scale_range=(0.5, 1.5), translate_max=0.1,
                 rotate_max=10.0, min_box_size=1e-3):
        self.seed = seed
        self.scale_range = scale_range
        self.translate_max = translate_max
        self.rotate_max = rotate_max
        self.min_box_size = min_box_size

    def transform(self, X):
        cfg, rng = self._config(), rng_from_seed(self.seed)
        return [affine_augment(img, cfg, rng) for img in X]


class PcaColorAugmenter(_SeededAugmenter):
    def __init__(self, seed=0, pca_sigma=0.1):
        self.seed = seed
        self.pca_sigma = pca_sigma

    def transform(self, X):
        cfg, rng = self._config(), rng_from_seed(self.seed)
        return [pca_color_augment(img, cfg, rng) for img in X]
