"""End-to-end fusion: three weight branches, refinement, pyramid blending."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import FusionConfig, as_stack_array, to_luminance
from .exposedness import adaptive_exposedness
from .fusion import combine_weights, fuse
from .guided_filter import GuidedFilterParams
from .pca_weights import pca_weight_maps
from .saliency import image_signature_saliency

logger = logging.getLogger(__name__)


@dataclass
class FusionResult:
    fused: np.ndarray
    pca: np.ndarray
    exposedness: np.ndarray
    saliency: np.ndarray
    weights: np.ndarray
    seconds: float = 0.0


def branch_maps(stack, config: FusionConfig | None = None, threads: int = 1):
    """Return the PCA, exposedness and saliency stacks, each ``(N, H, W)``."""
    config = config or FusionConfig()
    images = as_stack_array(stack)
    gray = to_luminance(images)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pca_future = pool.submit(pca_weight_maps, images, config)
            expo = np.stack(list(pool.map(lambda y: adaptive_exposedness(y, config), gray)))
            sal = np.stack(list(pool.map(lambda im: image_signature_saliency(im, config), images)))
            pca = pca_future.result()
    else:
        pca = pca_weight_maps(images, config)
        expo = np.stack([adaptive_exposedness(y, config) for y in gray])
        sal = np.stack([image_signature_saliency(im, config) for im in images])
    return pca, expo, sal


def fuse_stack(stack, config: FusionConfig | None = None, threads: int = 1) -> FusionResult:
    """Run the whole fusion pipeline on one exposure stack."""
    config = config or FusionConfig()
    images = as_stack_array(stack)
    t0 = time.perf_counter()
    pca, expo, sal = branch_maps(images, config, threads)
    params = GuidedFilterParams(config.gf_radius, config.gf_eps)
    weights = combine_weights(pca, expo, sal, images, params)
    fused = fuse(images, weights, config)
    elapsed = time.perf_counter() - t0
    logger.info("fused %d exposures of %dx%d in %.3f s",
                images.shape[0], images.shape[2], images.shape[1], elapsed)
    return FusionResult(fused, pca, expo, sal, weights, elapsed)
