"""Input validation helpers shared by the estimator-facing surfaces."""

from __future__ import annotations

import numpy as np

from .errors import ContractError


def check_rgb_image(pixels) -> np.ndarray:
    """Require an H x W x 3 uint8 array and return it."""
    if not isinstance(pixels, np.ndarray):
        raise ContractError(f"image must be a numpy array, got {type(pixels).__name__}")
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise ContractError(f"image must be H x W x 3, got shape {pixels.shape}")
    if pixels.dtype != np.uint8:
        raise ContractError(f"image dtype must be uint8, got {pixels.dtype}")
    return pixels


def check_ratio(value: float, name: str, *, inclusive_low: bool = False) -> float:
    """Require a threshold-style ratio in (0, 1), optionally [0, 1)."""
    low_ok = value >= 0 if inclusive_low else value > 0
    if not (low_ok and value < 1):
        bounds = "[0, 1)" if inclusive_low else "(0, 1)"
        raise ContractError(f"{name} must be in {bounds}, got {value}")
    return value
