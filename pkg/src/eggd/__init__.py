"""Efficient Geodesic Gramian Denoising (EGGD).

Non-local patch-based image denoising: patches of a noisy channel are graphed
by nearest neighbors, their geodesic distances are centered into a Gramian,
and the patch cloud is projected onto the Gramian's leading singular vectors
before Shepard merging rebuilds the channel. Includes RGB/YCbCr three-channel
orchestration, Gaussian noise injection, and quality metrics.
"""

from .colorspace import ParamTriplet, denoise_rgb, rgb_to_ycbcr, ycbcr_to_rgb
from .denoiser import ChannelParams, denoise_channel, project_patches
from .errors import ConvergenceError, DisconnectedGraphError, EggdError
from .graph import (
    PatchGraph,
    build_knn_graph,
    ensure_connected,
    geodesic_distances,
    patch_distance,
)
from .linalg import SingularTriplets, double_center, exact_svd, qr_orthonormalize, rsvd
from .metrics import MetricsReport, psnr, report, rmse, shannon_entropy, ssim
from .noise import NoiseSpec, add_gaussian_noise, measure_zeta
from .patches import (
    PixelNeighborhood,
    extract_patches,
    merge_patches,
    pixel_neighborhood,
    shepard_weight,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "ConvergenceError",
    "DisconnectedGraphError",
    "EggdError",
    "MetricsReport",
    "NoiseSpec",
    "ParamTriplet",
    "PatchGraph",
    "PixelNeighborhood",
    "SingularTriplets",
    "add_gaussian_noise",
    "build_knn_graph",
    "denoise_channel",
    "denoise_rgb",
    "double_center",
    "ensure_connected",
    "exact_svd",
    "extract_patches",
    "geodesic_distances",
    "measure_zeta",
    "merge_patches",
    "patch_distance",
    "pixel_neighborhood",
    "project_patches",
    "psnr",
    "qr_orthonormalize",
    "report",
    "rgb_to_ycbcr",
    "rmse",
    "rsvd",
    "shannon_entropy",
    "shepard_weight",
    "ssim",
    "ycbcr_to_rgb",
]
