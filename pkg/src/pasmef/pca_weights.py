"""PCA-score weight maps.

Each exposure's luminance becomes one variable of an ``rc x N`` data matrix.
The scores of the observations along the principal axes are rescaled,
smoothed and normalised into one weight map per exposure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    FusionConfig,
    SizeMismatch,
    as_stack_array,
    gaussian_smooth,
    normalize_sum_to_one,
    rescale_unit,
    to_luminance,
)

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
EIGEN_CLAMP = 1e-9
SCORE_REL_TOL = 1e-9


@dataclass(frozen=True)
class PcaResult:
    mean: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    scores: np.ndarray
    covariance: np.ndarray


def jacobi_eigh(sym: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decompose a small symmetric matrix with cyclic Jacobi rotations.

    Returns eigenvalues in descending order and the matching orthonormal
    eigenvectors as columns.  Each column is sign-flipped so that its
    largest-magnitude entry is positive.
    """
    a = np.array(sym, dtype=np.float64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    v = np.eye(n)
    scale = max(np.sqrt(np.sum(a * a)), np.finfo(float).tiny)

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    vals = np.diag(a).copy()
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = v[:, order]
    for j in range(n):
        k = np.argmax(np.abs(vecs[:, j]))
        if vecs[k, j] < 0:
            vecs[:, j] = -vecs[:, j]
    return vals, vecs


def compute_pca_scores(stack) -> PcaResult:
    """PCA of the grayscale exposures treated as N variables over rc pixels."""
    images = as_stack_array(stack)
    n, h, w, _ = images.shape
    if h * w < 2:
        raise SizeMismatch("PCA needs at least two pixels per exposure")
    data = to_luminance(images).reshape(n, h * w).T
    mean = data.mean(axis=0)
    centered = data - mean
    cov = centered.T @ centered / (h * w - 1)
    vals, vecs = jacobi_eigh(cov)
    if vals.min() < -EIGEN_CLAMP:
        raise ArithmeticError(f"covariance has negative eigenvalue {vals.min():.3g}")
    vals = np.maximum(vals, 0.0)
    return PcaResult(mean=mean, eigenvalues=vals, eigenvectors=vecs,
                     scores=centered @ vecs, covariance=cov)


def score_maps(pca: PcaResult, shape) -> np.ndarray:
    """Rescale every score column to [0, 1] and reshape to ``(N, H, W)``."""
    h, w = shape
    scale = np.abs(pca.scores).max()
    cols = []
    for j in range(pca.scores.shape[1]):
        col = pca.scores[:, j]
        # a column that is rounding noise relative to the leading scores counts as constant
        if np.ptp(col) <= SCORE_REL_TOL * scale:
            cols.append(np.full_like(col, 0.5))
        else:
            cols.append(rescale_unit(col))
    return np.stack(cols).reshape(-1, h, w)


def pca_weight_maps(stack, config: FusionConfig | None = None, *, smooth: bool = True) -> np.ndarray:
    """Normalised PCA weight maps, one per exposure.

    The k-th principal component's scores are assigned to the k-th exposure.
    """
    config = config or FusionConfig()
    images = as_stack_array(stack)
    maps = score_maps(compute_pca_scores(images), images.shape[1:3])
    if smooth:
        maps = np.stack([gaussian_smooth(m, config.pca_smooth_sigma) for m in maps])
    return normalize_sum_to_one(np.maximum(maps, 0.0))
