"""Guided filter with truncated-window box means."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SizeMismatch


@dataclass(frozen=True)
class GuidedFilterParams:
    radius: int = 8
    eps: float = 0.01

    def __post_init__(self):
        if int(self.radius) != self.radius or self.radius < 1:
            raise ValueError(f"radius must be an integer >= 1, got {self.radius}")
        if not self.eps > 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")


def _window_sum_1d(a: np.ndarray, r: int, axis: int) -> np.ndarray:
    # running sums over [i - r, i + r], clipped to the array
    a = np.moveaxis(a, axis, -1)
    n = a.shape[-1]
    c = np.concatenate([np.zeros(a.shape[:-1] + (1,)), np.cumsum(a, axis=-1)], axis=-1)
    hi = np.minimum(np.arange(n) + r + 1, n)
    lo = np.maximum(np.arange(n) - r, 0)
    out = c[..., hi] - c[..., lo]
    return np.moveaxis(out, -1, axis)


def window_counts(shape, radius: int) -> np.ndarray:
    h, w = shape
    ny = np.minimum(np.arange(h) + radius, h - 1) - np.maximum(np.arange(h) - radius, 0) + 1
    nx = np.minimum(np.arange(w) + radius, w - 1) - np.maximum(np.arange(w) - radius, 0) + 1
    return np.outer(ny, nx).astype(np.float64)


def box_filter(plane: np.ndarray, radius: int) -> np.ndarray:
    """Mean over the (2r+1)x(2r+1) window, dividing by the in-bounds count."""
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    plane = np.asarray(plane, dtype=np.float64)
    s = _window_sum_1d(_window_sum_1d(plane, radius, 0), radius, 1)
    return s / window_counts(plane.shape, radius)


def guided_filter_coefficients(guide, src, params: GuidedFilterParams):
    """Per-window linear model ``src ~ a * guide + b``."""
    r, eps = params.radius, params.eps
    mean_i = box_filter(guide, r)
    mean_p = box_filter(src, r)
    cov_ip = box_filter(guide * src, r) - mean_i * mean_p
    var_i = box_filter(guide * guide, r) - mean_i * mean_i
    a = cov_ip / (var_i + eps)
    b = mean_p - a * mean_i
    return a, b


def guided_filter(guide: np.ndarray, src: np.ndarray, params: GuidedFilterParams | None = None) -> np.ndarray:
    """Edge-preserving smoothing of ``src`` steered by ``guide``.

    Parameters
    ----------
    guide : ndarray (H, W)
        Guidance image, values on a [0, 1] scale.
    src : ndarray (H, W)
        Plane to be filtered.
    params : GuidedFilterParams, optional
        Window radius and regulariser.

    Returns
    -------
    ndarray (H, W)
        ``mean(a) * guide + mean(b)`` with all means over the same window.
    """
    params = params or GuidedFilterParams()
    guide = np.asarray(guide, dtype=np.float64)
    src = np.asarray(src, dtype=np.float64)
    if guide.shape != src.shape or guide.ndim != 2:
        raise SizeMismatch(f"guide {guide.shape} and input {src.shape} must be equal 2-D shapes")
    a, b = guided_filter_coefficients(guide, src, params)
    return box_filter(a, params.radius) * guide + box_filter(b, params.radius)
