"""Probability masses over small integer alphabets, kept inside (eps, 1 - eps)."""
from __future__ import annotations

import numpy as np

from .errors import DegenerateMass

EPS = 1e-6


def clamp(values, eps: float = EPS) -> np.ndarray:
    """Normalize, clip entries to ``[eps, 1 - eps]`` and renormalize along the last axis."""
    values = np.asarray(values, dtype=float)
    total = values.sum(axis=-1, keepdims=True)
    if np.any(total <= 0) or not np.all(np.isfinite(total)):
        raise DegenerateMass("mass normalizer is zero or not finite")
    values = values / total
    if eps > 0 and values.shape[-1] > 1:
        values = np.clip(values, eps, 1.0 - eps)
        values = values / values.sum(axis=-1, keepdims=True)
    return values


def as_mass(values, eps: float = EPS) -> np.ndarray:
    """Validate and clamp a user supplied mass vector."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("a mass is a non-empty 1-D vector")
    if np.any(values < 0):
        raise ValueError("mass entries must be non-negative")
    return clamp(values, eps)


def uniform(q: int) -> np.ndarray:
    return np.full(q, 1.0 / q)


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p, float) - np.asarray(q, float)).sum())
