"""MEF-SSIM: structural fidelity of a fused image to its exposure stack.

For each patch the exposures' centred signals are split into strength
(norm) and structure (unit vector).  The desired patch takes the largest
strength and the strength-weighted mean structure; its similarity to the
fused patch, excluding means, is averaged over all patches.

Everything is computed with window sums, so no patch is ever materialised.
The pairwise-covariance algebra used here is checked against an explicit
patch loop in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SizeMismatch, as_stack_array, to_luminance


@dataclass(frozen=True)
class MefSsimConfig:
    patch_size: int = 8
    stride: int = 1
    stability_const: float = 0.03 ** 2
    strength_exponent: float = 4.0

    def __post_init__(self):
        if self.patch_size < 2:
            raise ValueError("patch_size must be >= 2")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if not self.stability_const > 0:
            raise ValueError("stability_const must be > 0")


def _valid_window_mean(x: np.ndarray, size: int, stride: int) -> np.ndarray:
    """Mean over every size x size patch fully inside the image."""
    def along(a, axis):
        a = np.moveaxis(a, axis, -1)
        c = np.concatenate([np.zeros(a.shape[:-1] + (1,)), np.cumsum(a, axis=-1)], axis=-1)
        s = c[..., size:] - c[..., :-size]
        return np.moveaxis(s[..., ::stride], -1, axis)

    return along(along(x, -2), -1) / (size * size)


def mef_ssim_map(stack, fused, config: MefSsimConfig | None = None) -> np.ndarray:
    """Per-patch MEF-SSIM values (one per valid patch position)."""
    config = config or MefSsimConfig()
    images = as_stack_array(stack)
    fused = np.asarray(fused, dtype=np.float64)
    if fused.ndim == 3:
        fused = to_luminance(fused)
    if fused.shape != images.shape[1:3]:
        raise SizeMismatch(f"fused image {fused.shape} does not match stack {images.shape[1:3]}")
    k = config.patch_size
    if min(fused.shape) < k:
        raise SizeMismatch(f"image {fused.shape} smaller than patch size {k}")

    xs = to_luminance(images)
    y = fused
    n = xs.shape[0]
    npix = float(k * k)

    def mean(a):
        return _valid_window_mean(a, k, config.stride)

    mu_x = mean(xs)
    mu_y = mean(y)
    var_y = np.maximum(mean(y * y) - mu_y ** 2, 0.0)
    cov_xy = mean(xs * y) - mu_x * mu_y
    var_x = np.maximum(mean(xs * xs) - mu_x ** 2, 0.0)

    strength = np.sqrt(npix * var_x)
    c_hat = strength.max(axis=0)

    # desired structure direction: sum_k omega_k (x_k - mu_k), omega_k = c_k^(p-1) / sum c^p
    p = config.strength_exponent
    wsum = np.sum(strength ** p, axis=0)
    has_structure = wsum > 0
    safe_wsum = np.where(has_structure, wsum, 1.0)
    omega = strength ** (p - 1.0) / safe_wsum

    # |sbar|^2 = npix * sum_ij omega_i omega_j cov(x_i, x_j), accumulated pairwise
    sbar_sq = np.zeros_like(mu_y)
    for i in range(n):
        sbar_sq += omega[i] * omega[i] * var_x[i]
        for j in range(i + 1, n):
            cov_ij = mean(xs[i] * xs[j]) - mu_x[i] * mu_x[j]
            sbar_sq += 2.0 * omega[i] * omega[j] * cov_ij
    sbar_norm = np.sqrt(np.maximum(npix * sbar_sq, 0.0))
    proj = np.einsum("i...,i...->...", omega, cov_xy)

    ok = has_structure & (sbar_norm > 0)
    gain = np.where(ok, c_hat / np.where(ok, sbar_norm, 1.0), 0.0)
    sigma_hat_y = gain * proj
    sigma_hat_sq = np.where(ok, c_hat * c_hat / npix, 0.0)

    C = config.stability_const
    return (2.0 * sigma_hat_y + C) / (sigma_hat_sq + var_y + C)


def mef_ssim(stack, fused, config: MefSsimConfig | None = None) -> float:
    """Average MEF-SSIM of ``fused`` against ``stack``; 1 is best."""
    return float(np.mean(mef_ssim_map(stack, fused, config)))
