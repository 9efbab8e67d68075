"""Multi-exposure fusion from PCA, adaptive well-exposedness and saliency weights."""

from .core import (
    ExposureStack,
    FusionConfig,
    load_stack,
    normalize_sum_to_one,
    read_image,
    to_luminance,
    write_png,
)
from .errors import (
    ChannelMismatch,
    DecodeError,
    DimensionMismatch,
    EmptyStack,
    InvalidLevels,
    NotNormalized,
    PasMefError,
    SizeMismatch,
)
from .exposedness import adaptive_exposedness
from .fusion import collapse, combine_weights, fuse, gaussian_pyramid, laplacian_pyramid
from .guided_filter import GuidedFilterParams, box_filter, guided_filter
from .metric import MefSsimConfig, mef_ssim
from .pca_weights import compute_pca_scores, pca_weight_maps
from .pipeline import FusionResult, fuse_stack
from .saliency import dct2, idct2, image_signature_saliency

__version__ = "0.1.0"

__all__ = [
    "ChannelMismatch", "DecodeError", "DimensionMismatch", "EmptyStack", "ExposureStack",
    "FusionConfig", "FusionResult", "GuidedFilterParams", "InvalidLevels", "MefSsimConfig",
    "NotNormalized", "PasMefError", "SizeMismatch", "adaptive_exposedness", "box_filter",
    "collapse", "combine_weights", "compute_pca_scores", "dct2", "fuse", "fuse_stack",
    "gaussian_pyramid", "guided_filter", "idct2", "image_signature_saliency",
    "laplacian_pyramid", "load_stack", "mef_ssim", "normalize_sum_to_one",
    "pca_weight_maps", "read_image", "to_luminance", "write_png",
]
