"""Adaptive well-exposedness on the luminance channel.

The Gaussian curve is centred at ``1 - mean(Y)`` with spread ``std(Y)``, so a
bright (long) exposure favours its dark pixels and a dark (short) exposure
favours its bright ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FusionConfig


@dataclass(frozen=True)
class LuminanceStats:
    mean: float
    std: float


def luminance_stats(y: np.ndarray) -> LuminanceStats:
    """Mean and population standard deviation, two-pass."""
    y = np.asarray(y, dtype=np.float64)
    mu = float(y.mean())
    sd = float(np.sqrt(np.mean((y - mu) ** 2)))
    return LuminanceStats(mu, sd)


def exposedness_curve(y, mean, std, sigma_floor: float = 1e-3):
    """Evaluate the adaptive exposedness curve for given statistics."""
    y = np.asarray(y, dtype=np.float64)
    sigma = np.maximum(std, sigma_floor)
    return np.exp(-((y - (1.0 - np.asarray(mean))) ** 2) / (2.0 * sigma * sigma))


def adaptive_exposedness(y: np.ndarray, config: FusionConfig | None = None) -> np.ndarray:
    """Well-exposedness map of one luminance plane using its own statistics."""
    config = config or FusionConfig()
    stats = luminance_stats(y)
    return exposedness_curve(y, stats.mean, stats.std, config.sigma_floor)
