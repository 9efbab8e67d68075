"""Image containers, decoding/encoding and small raster utilities.

Images are plain ``numpy`` float64 arrays in [0, 1]: ``(H, W)`` for a single
channel, ``(H, W, 3)`` for RGB.  A stack of exposures is ``(N, H, W, 3)``
and a weight stack is ``(N, H, W)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import cv2
import numpy as np
from scipy import ndimage

from .errors import (
    ChannelMismatch,
    DecodeError,
    DimensionMismatch,
    EmptyStack,
    SizeMismatch,
)

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".tif", ".tiff")

# BT.601 luma
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

ZERO_SUM_TOL = 1e-12


@dataclass(frozen=True)
class FusionConfig:
    """Every tunable of the fusion pipeline.

    Parameters
    ----------
    gf_radius : int
        Guided-filter box half-width in pixels.
    gf_eps : float
        Guided-filter regulariser on [0, 1] intensities.
    pca_smooth_sigma : float
        Gaussian sigma applied to the rescaled PCA score maps.
    saliency_width : int
        Working width of the image-signature saliency computation.
    saliency_blur_sigma : float
        Gaussian sigma applied to the saliency map at working size.
    pyramid_levels : int or "auto"
        Number of pyramid levels; ``"auto"`` uses floor(log2(min(r, c))) - 1.
    sigma_floor : float
        Lower bound on the luminance standard deviation in the
        well-exposedness curve.
    """

    gf_radius: int = 8
    gf_eps: float = 0.01
    pca_smooth_sigma: float = 2.0
    saliency_width: int = 64
    saliency_blur_sigma: float = 3.0
    pyramid_levels: Union[int, str] = "auto"
    sigma_floor: float = 1e-3

    def __post_init__(self):
        if int(self.gf_radius) != self.gf_radius or self.gf_radius < 1:
            raise ValueError(f"gf_radius must be an integer >= 1, got {self.gf_radius}")
        if not self.gf_eps > 0:
            raise ValueError(f"gf_eps must be > 0, got {self.gf_eps}")
        if not self.pca_smooth_sigma > 0:
            raise ValueError(f"pca_smooth_sigma must be > 0, got {self.pca_smooth_sigma}")
        if int(self.saliency_width) != self.saliency_width or self.saliency_width < 1:
            raise ValueError(f"saliency_width must be an integer >= 1, got {self.saliency_width}")
        if not self.saliency_blur_sigma > 0:
            raise ValueError(f"saliency_blur_sigma must be > 0, got {self.saliency_blur_sigma}")
        if not self.sigma_floor > 0:
            raise ValueError(f"sigma_floor must be > 0, got {self.sigma_floor}")
        levels = self.pyramid_levels
        if isinstance(levels, str):
            if levels != "auto":
                raise ValueError(f"pyramid_levels must be an integer or 'auto', got {levels!r}")
        elif int(levels) != levels or levels < 1:
            raise ValueError(f"pyramid_levels must be >= 1, got {levels}")


@dataclass(frozen=True)
class ExposureStack:
    """Ordered exposures of one static scene, darkest first."""

    images: np.ndarray
    names: tuple = field(default=())

    def __post_init__(self):
        images = np.asarray(self.images, dtype=np.float64)
        if images.ndim != 4 or images.shape[-1] != 3:
            raise ChannelMismatch(f"expected (N, H, W, 3) stack, got shape {images.shape}")
        if images.shape[0] < 1:
            raise EmptyStack("no decodable images")
        images.setflags(write=False)
        object.__setattr__(self, "images", images)

    @property
    def n_exposures(self) -> int:
        return self.images.shape[0]

    @property
    def shape(self):
        return self.images.shape[1:3]

    def __len__(self):
        return self.n_exposures

    def __array__(self, dtype=None, copy=None):
        return self.images if dtype is None else self.images.astype(dtype)


def as_stack_array(stack) -> np.ndarray:
    """Return an ``(N, H, W, 3)`` float array for an ExposureStack or array-like."""
    if isinstance(stack, ExposureStack):
        return stack.images
    arr = np.asarray(stack, dtype=np.float64)
    if arr.ndim != 4 or arr.shape[-1] != 3:
        raise ChannelMismatch(f"expected (N, H, W, 3) stack, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise EmptyStack("no decodable images")
    return arr


def read_image(path) -> np.ndarray:
    """Decode an 8- or 16-bit PNG/JPEG/TIFF file to an RGB float image in [0, 1]."""
    path = os.fspath(path)
    raw = cv2.imread(path, cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise DecodeError(f"cannot decode image file: {path}")
    if raw.dtype == np.uint8:
        img = raw.astype(np.float64) / 255.0
    elif raw.dtype == np.uint16:
        img = raw.astype(np.float64) / 65535.0
    elif raw.dtype in (np.float32, np.float64):
        img = np.clip(raw.astype(np.float64), 0.0, 1.0)
    else:
        raise DecodeError(f"unsupported sample type {raw.dtype} in {path}")

    if img.ndim == 2:
        img = np.repeat(img[:, :, None], 3, axis=2)
    elif img.shape[2] == 1:
        img = np.repeat(img, 3, axis=2)
    elif img.shape[2] == 4:
        img = img[:, :, 2::-1]
    elif img.shape[2] == 3:
        img = img[:, :, ::-1]
    else:
        raise DecodeError(f"unsupported channel count {img.shape[2]} in {path}")
    return np.ascontiguousarray(img)


def to_uint8(img: np.ndarray) -> np.ndarray:
    """Quantize [0, 1] samples to 8 bits, rounding half up."""
    img = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    return np.floor(img * 255.0 + 0.5).astype(np.uint8)


def write_png(path, img: np.ndarray) -> None:
    """Write a single-channel or RGB [0, 1] image as an 8-bit PNG."""
    q = to_uint8(img)
    if q.ndim == 3:
        q = q[:, :, ::-1]
    path = os.fspath(path)
    if not cv2.imwrite(path, q):
        raise OSError(f"failed to write {path}")


def list_image_files(directory) -> list:
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    return sorted(
        (p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
        key=lambda p: p.name,
    )


def load_stack(directory, config: FusionConfig | None = None) -> ExposureStack:
    """Load every image in ``directory`` as one exposure stack.

    Files are ordered by filename, which stands in for ascending exposure.
    Files with unrecognised suffixes are ignored.
    """
    files = list_image_files(directory)
    if not files:
        raise EmptyStack(f"no decodable images in {directory}")
    images = [read_image(p) for p in files]
    ref = images[0].shape[:2]
    for p, img in zip(files, images):
        if img.shape[:2] != ref:
            raise DimensionMismatch(
                f"{p.name} is {img.shape[1]}x{img.shape[0]}, expected {ref[1]}x{ref[0]}"
            )
    return ExposureStack(np.stack(images), tuple(p.name for p in files))


def to_luminance(img: np.ndarray) -> np.ndarray:
    """BT.601 luma of an RGB image (any leading batch axes allowed)."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim < 3 or img.shape[-1] != 3:
        raise ChannelMismatch(f"luminance needs an RGB image, got shape {img.shape}")
    r, g, b = LUMA_WEIGHTS
    return r * img[..., 0] + g * img[..., 1] + b * img[..., 2]


def normalize_sum_to_one(maps: np.ndarray) -> np.ndarray:
    """Divide an ``(N, H, W)`` stack of non-negative maps by its per-pixel sum.

    Pixels whose sum is below 1e-12 receive the uniform weight 1/N.
    """
    maps = np.asarray(maps, dtype=np.float64)
    if maps.ndim != 3:
        raise SizeMismatch(f"expected (N, H, W) weight stack, got shape {maps.shape}")
    if np.any(maps < 0):
        raise ValueError("weight maps must be non-negative")
    n = maps.shape[0]
    total = maps.sum(axis=0)
    degenerate = total < ZERO_SUM_TOL
    safe = np.where(degenerate, 1.0, total)
    out = maps / safe
    if degenerate.any():
        out[:, degenerate] = 1.0 / n
    return out


def check_same_size(*arrays) -> None:
    shapes = {np.shape(a) for a in arrays}
    if len(shapes) > 1:
        raise SizeMismatch(f"size mismatch: {sorted(shapes)}")


def gaussian_smooth(plane: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian blur with half-width 3 sigma and symmetric (reflect) borders."""
    return ndimage.gaussian_filter(
        np.asarray(plane, dtype=np.float64), sigma, mode="reflect", truncate=3.0
    )


def rescale_unit(values: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """Min-max rescale to [0, 1]; a (numerically) constant array maps to 0.5."""
    values = np.asarray(values, dtype=np.float64)
    lo, hi = values.min(), values.max()
    span = hi - lo
    if span <= rel_tol * max(abs(lo), abs(hi), 1e-300):
        return np.full_like(values, 0.5)
    return (values - lo) / span


def _linear_resize_matrix(n_in: int, n_out: int) -> np.ndarray:
    # triangle kernel, widened when shrinking so it also low-passes
    scale = n_out / n_in
    width = 1.0 / scale if scale < 1 else 1.0
    centers = (np.arange(n_out) + 0.5) / scale - 0.5
    left = np.floor(centers - width).astype(int)
    taps = int(np.ceil(2 * width)) + 2
    idx = left[:, None] + np.arange(taps)[None, :]
    w = np.maximum(0.0, 1.0 - np.abs(centers[:, None] - idx) / width)
    # half-sample symmetric extension
    idx = np.where(idx < 0, -idx - 1, idx)
    idx = np.where(idx >= n_in, 2 * n_in - idx - 1, idx)
    idx = np.clip(idx, 0, n_in - 1)
    mat = np.zeros((n_out, n_in))
    np.add.at(mat, (np.repeat(np.arange(n_out), taps), idx.ravel()), w.ravel())
    mat /= mat.sum(axis=1, keepdims=True)
    return mat


def resize_bilinear(plane: np.ndarray, out_shape: Sequence[int]) -> np.ndarray:
    """Bilinear resize of a single plane (antialiased when shrinking)."""
    # strided planes push matmul off the BLAS path
    plane = np.ascontiguousarray(plane, dtype=np.float64)
    h, w = plane.shape
    ho, wo = int(out_shape[0]), int(out_shape[1])
    if (ho, wo) == (h, w):
        return plane.copy()
    ry = _linear_resize_matrix(h, ho)
    rx = _linear_resize_matrix(w, wo)
    return ry @ plane @ rx.T
