"""Tomato crop-disease detection, evaluation, augmentation and advisory service."""

from .augment import (
    AffineAugmenter,
    AffineParams,
    AnnotatedImage,
    AugmentationConfig,
    MixupAugmenter,
    MosaicAugmenter,
    PcaColorAugmenter,
    affine_augment,
    mixup,
    mosaic,
    pca_color_augment,
    rgb_covariance_eigen,
    rng_from_seed,
)
from .backend import (
    BackendSpec,
    ModelDescriptor,
    OnnxBackend,
    ScaleSpec,
    StubBackend,
    default_fixture_path,
    image_content_hash,
    infer,
    load_backend,
)
from .boxes import (
    BoundingBox,
    LetterboxMapping,
    iou,
    letterbox,
    map_box_to_letterbox,
    map_box_to_original,
)
from .decode import (
    DEFAULT_CONF_THRESHOLD,
    DEFAULT_IOU_THRESHOLD,
    Detection,
    RawHeadOutput,
    decode_head,
    non_max_suppression,
    sigmoid,
)
from .errors import (
    AnnotationParseError,
    BackendConfigError,
    BackendLoadError,
    BackendRuntimeError,
    ContractError,
    ImageDecodeError,
    KbValidationError,
    ShapeError,
    TomatodetError,
)
from .feedback import FeedbackLog, FeedbackRecord
from .kb import (
    DiseaseEntry,
    KnowledgeBase,
    NoRemedyDefinedError,
    UnknownSlugError,
    apply_delta,
    kb_delta,
    load_kb,
    load_seed_kb,
    lookup,
    save_kb,
    serialize_kb,
    validate_kb,
)
from .labels import CLASS_LABELS, DISEASE_SLUGS, NUM_CLASSES, ClassLabel, by_id, by_slug
from .metrics import (
    DEFAULT_EVAL_IOU,
    EvalReport,
    EvalSample,
    average_precision,
    format_report,
    match_detections,
    mean_average_precision,
)
from .pipeline import DiseaseDetector, detect_image

__version__ = "0.1.0"

__all__ = [
    "AffineAugmenter",
    "AffineParams",
    "AnnotatedImage",
    "AnnotationParseError",
    "AugmentationConfig",
    "BackendConfigError",
    "BackendLoadError",
    "BackendRuntimeError",
    "BackendSpec",
    "BoundingBox",
    "CLASS_LABELS",
    "ClassLabel",
    "ContractError",
    "DEFAULT_CONF_THRESHOLD",
    "DEFAULT_EVAL_IOU",
    "DEFAULT_IOU_THRESHOLD",
    "DISEASE_SLUGS",
    "Detection",
    "DiseaseDetector",
    "DiseaseEntry",
    "EvalReport",
    "EvalSample",
    "FeedbackLog",
    "FeedbackRecord",
    "ImageDecodeError",
    "KbValidationError",
    "KnowledgeBase",
    "LetterboxMapping",
    "MixupAugmenter",
    "ModelDescriptor",
    "MosaicAugmenter",
    "NUM_CLASSES",
    "NoRemedyDefinedError",
    "OnnxBackend",
    "PcaColorAugmenter",
    "RawHeadOutput",
    "ScaleSpec",
    "ShapeError",
    "StubBackend",
    "TomatodetError",
    "UnknownSlugError",
    "affine_augment",
    "apply_delta",
    "average_precision",
    "by_id",
    "by_slug",
    "decode_head",
    "default_fixture_path",
    "detect_image",
    "format_report",
    "image_content_hash",
    "infer",
    "iou",
    "kb_delta",
    "letterbox",
    "load_backend",
    "load_kb",
    "load_seed_kb",
    "lookup",
    "map_box_to_letterbox",
    "map_box_to_original",
    "match_detections",
    "mean_average_precision",
    "mixup",
    "mosaic",
    "non_max_suppression",
    "pca_color_augment",
    "rgb_covariance_eigen",
    "rng_from_seed",
    "save_kb",
    "serialize_kb",
    "sigmoid",
    "validate_kb",
]
