"""BPSK over additive white Gaussian noise, and channel evidence."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mass import EPS


@dataclass(frozen=True)
class ChannelConfig:
    """Eb/N0 in dB and code rate; symbols have unit energy."""

    ebn0_db: float
    rate: float

    def __post_init__(self):
        if not 0.0 < self.rate <= 1.0:
            raise ValueError(f"rate must lie in (0, 1], got {self.rate}")

    @property
    def noise_var(self) -> float:
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))

    @property
    def noise_sigma(self) -> float:
        return float(np.sqrt(self.noise_var))


def modulate(bits) -> np.ndarray:
    """Bit 0 maps to +1, bit 1 to -1."""
    bits = np.asarray(bits).astype(np.int64)
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    return 1.0 - 2.0 * bits


def transmit(codeword, cfg: ChannelConfig, seed) -> np.ndarray:
    """Antipodal symbols plus iid Gaussian noise of variance ``cfg.noise_var``."""
    x = modulate(codeword)
    rng = np.random.default_rng(seed)
    return x + rng.normal(0.0, cfg.noise_sigma, size=x.shape)


def to_evidence(y, cfg: ChannelConfig, eps: float = EPS) -> np.ndarray:
    """Posterior bit masses ``[..., (P(0|y), P(1|y))]``, clamped to ``[eps, 1-eps]``."""
    y = np.asarray(y, dtype=float)
    llr = 2.0 * y / cfg.noise_var
    p0 = 0.5 * (1.0 + np.tanh(0.5 * llr))  # logistic, without overflow
    p0 = np.clip(p0, eps, 1.0 - eps)
    return np.stack([p0, 1.0 - p0], axis=-1)
