"""Image-signature saliency.

The signature of a plane is the sign of its DCT coefficients; transforming
the signature back concentrates energy on spatially sparse foreground.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .core import (
    ChannelMismatch,
    FusionConfig,
    gaussian_smooth,
    rescale_unit,
    resize_bilinear,
)

# coefficients this far below the channel's largest are rounding noise
SIGN_REL_TOL = 1e-10


@lru_cache(maxsize=64)
def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II basis; row k is the k-th cosine."""
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    mat = np.cos(np.pi * (2 * i + 1) * k / (2 * n))
    mat[0] *= np.sqrt(1.0 / n)
    mat[1:] *= np.sqrt(2.0 / n)
    mat.setflags(write=False)
    return mat


def dct2(plane: np.ndarray) -> np.ndarray:
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2 or plane.size == 0:
        raise ValueError(f"dct2 needs a nonempty 2-D plane, got shape {plane.shape}")
    m, n = plane.shape
    return dct_matrix(m) @ plane @ dct_matrix(n).T


def idct2(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.ndim != 2 or coeffs.size == 0:
        raise ValueError(f"idct2 needs a nonempty 2-D plane, got shape {coeffs.shape}")
    m, n = coeffs.shape
    return dct_matrix(m).T @ coeffs @ dct_matrix(n)


def signature(coeffs: np.ndarray) -> np.ndarray:
    """Ternary sign of DCT coefficients; near-zero entries map to 0."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    cutoff = SIGN_REL_TOL * np.abs(coeffs).max()
    return np.where(np.abs(coeffs) <= cutoff, 0.0, np.sign(coeffs))


def working_shape(shape, width: int):
    h, w = shape
    if w <= width:
        return h, w
    return max(1, int(round(h * width / w))), width


def signature_energy(img_small: np.ndarray) -> np.ndarray:
    """Sum over channels of the squared signature reconstruction."""
    energy = np.zeros(img_small.shape[:2])
    for ch in range(img_small.shape[2]):
        recon = idct2(signature(dct2(img_small[:, :, ch])))
        energy += recon * recon
    return energy


def image_signature_saliency(img: np.ndarray, config: FusionConfig | None = None) -> np.ndarray:
    """Saliency map in [0, 1] at full resolution for one RGB image."""
    config = config or FusionConfig()
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ChannelMismatch(f"saliency needs an RGB image, got shape {img.shape}")
    h, w = img.shape[:2]
    small_shape = working_shape((h, w), config.saliency_width)
    small = np.stack([resize_bilinear(img[:, :, c], small_shape) for c in range(3)], axis=2)
    energy = gaussian_smooth(signature_energy(small), config.saliency_blur_sigma)
    return rescale_unit(resize_bilinear(energy, (h, w)))
