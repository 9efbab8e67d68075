"""Weight combination and Laplacian-pyramid blending."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import FusionConfig, as_stack_array, normalize_sum_to_one, to_luminance
from .errors import InvalidLevels, NotNormalized, SizeMismatch
from .guided_filter import GuidedFilterParams, guided_filter

BINOMIAL_5 = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0
PARTITION_TOL = 1e-6


@dataclass
class Pyramid:
    levels: list
    flavor: str

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, k):
        return self.levels[k]


def max_levels(shape) -> int:
    return max(1, int(math.floor(math.log2(min(shape[0], shape[1])))))


def auto_levels(shape) -> int:
    return max(1, int(math.floor(math.log2(min(shape[0], shape[1])))) - 1)


def resolve_levels(shape, levels) -> int:
    if levels is None or levels == "auto":
        return auto_levels(shape)
    if isinstance(levels, str) or int(levels) != levels:
        raise InvalidLevels(f"levels must be an integer or 'auto', got {levels!r}")
    levels = int(levels)
    if levels < 1 or levels > max_levels(shape):
        raise InvalidLevels(
            f"levels={levels} outside [1, {max_levels(shape)}] for a {shape[1]}x{shape[0]} image"
        )
    return levels


def _blur(x: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    x = ndimage.convolve1d(x, kernel, axis=0, mode="mirror")
    return ndimage.convolve1d(x, kernel, axis=1, mode="mirror")


def downsample(x: np.ndarray) -> np.ndarray:
    return _blur(x, BINOMIAL_5)[::2, ::2]


def upsample(x: np.ndarray, shape) -> np.ndarray:
    """Zero-stuff to ``shape`` (first two axes) and interpolate."""
    up = np.zeros(tuple(shape[:2]) + x.shape[2:])
    up[::2, ::2] = x
    return _blur(up, 2.0 * BINOMIAL_5)


def gaussian_pyramid(x: np.ndarray, levels) -> Pyramid:
    x = np.asarray(x, dtype=np.float64)
    n = resolve_levels(x.shape, levels)
    out = [x]
    for _ in range(n - 1):
        out.append(downsample(out[-1]))
    return Pyramid(out, "gaussian")


def laplacian_pyramid(x: np.ndarray, levels) -> Pyramid:
    gauss = gaussian_pyramid(x, levels).levels
    out = [g - upsample(gn, g.shape) for g, gn in zip(gauss[:-1], gauss[1:])]
    out.append(gauss[-1])
    return Pyramid(out, "laplacian")


def collapse(pyr: Pyramid) -> np.ndarray:
    if pyr.flavor != "laplacian":
        raise ValueError("only a Laplacian pyramid can be collapsed")
    img = pyr.levels[-1]
    for detail in reversed(pyr.levels[:-1]):
        img = detail + upsample(img, detail.shape)
    return img


def _canonical_product(*maps: np.ndarray) -> np.ndarray:
    # sort factors per pixel so the result does not depend on argument order
    return np.prod(np.sort(np.stack(maps), axis=0), axis=0)


def combine_weights(pca_maps, exposedness_maps, saliency_maps, stack,
                    params: GuidedFilterParams | None = None) -> np.ndarray:
    """Multiply the three branch maps, guided-filter each product, normalise.

    The guide for exposure n is its own luminance.
    """
    params = params or GuidedFilterParams()
    images = as_stack_array(stack)
    p = np.asarray(pca_maps, dtype=np.float64)
    a = np.asarray(exposedness_maps, dtype=np.float64)
    s = np.asarray(saliency_maps, dtype=np.float64)
    if not (p.shape == a.shape == s.shape == images.shape[:3]):
        raise SizeMismatch(
            f"weight stacks {p.shape}, {a.shape}, {s.shape} do not match stack {images.shape[:3]}"
        )
    gray = to_luminance(images)
    raw = _canonical_product(p, a, s)
    refined = np.stack([guided_filter(gray[n], raw[n], params) for n in range(len(raw))])
    return normalize_sum_to_one(np.maximum(refined, 0.0))


def check_normalized(weights: np.ndarray, tol: float = PARTITION_TOL) -> None:
    if weights.min() < 0:
        raise NotNormalized("weights contain negative values")
    err = np.abs(weights.sum(axis=0) - 1.0).max()
    if err > tol:
        raise NotNormalized(f"weights deviate from sum-to-one by {err:.3g}")


def _ordered_sum(terms: list) -> np.ndarray:
    # per-sample sort makes the sum invariant to exposure order
    if len(terms) == 1:
        return terms[0]
    return np.sort(np.stack(terms), axis=0).sum(axis=0)


def fuse(stack, weights, config: FusionConfig | None = None, *, clip: bool = True) -> np.ndarray:
    """Blend the exposures with Gaussian weight pyramids over Laplacian image pyramids."""
    config = config or FusionConfig()
    images = as_stack_array(stack)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != images.shape[:3]:
        raise SizeMismatch(f"weights {weights.shape} do not match stack {images.shape[:3]}")
    check_normalized(weights)
    levels = resolve_levels(images.shape[1:3], config.pyramid_levels)

    per_level = [[] for _ in range(levels)]
    for img, w in zip(images, weights):
        lap = laplacian_pyramid(img, levels)
        gw = gaussian_pyramid(w, levels)
        for k in range(levels):
            per_level[k].append(gw[k][:, :, None] * lap[k])
    fused = collapse(Pyramid([_ordered_sum(t) for t in per_level], "laplacian"))
    return np.clip(fused, 0.0, 1.0) if clip else fused
