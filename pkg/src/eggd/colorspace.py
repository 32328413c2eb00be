"""RGB/YCbCr conversion and the three-channel denoising driver.

Images are stored channel-major as (3, n, n) float64 arrays with values in
[0, 255]. The two conversion matrices are approximate inverses of each other;
round trips are accurate to within two intensity levels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .denoiser import ChannelParams, denoise_channel
from .patches import validate_channel

_SEED_MODULUS = 2**64

RGB_TO_YCBCR = np.array(
    [
        [0.299, 0.587, 0.114],
        [-0.169, -0.331, 0.500],
        [0.500, -0.419, -0.081],
    ]
)
YCBCR_OFFSET = np.array([0.0, 128.0, 128.0])
YCBCR_TO_RGB = np.array(
    [
        [1.000, 0.000, 1.400],
        [1.000, -0.343, -0.711],
        [1.000, 1.765, 0.000],
    ]
)


def validate_rgb(image: np.ndarray) -> np.ndarray:
    """Check a (3, n, n) channel-major image with square finite channels."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[0] != 3:
        raise ValueError(f"expected a (3, n, n) image, got shape {arr.shape}")
    for channel in arr:
        validate_channel(channel)
    return arr


@dataclass(frozen=True)
class ParamTriplet:
    """Channel parameters for the Y, Cb, and Cr pipelines."""

    y: ChannelParams
    cb: ChannelParams
    cr: ChannelParams


def rgb_to_ycbcr(image: np.ndarray) -> np.ndarray:
    """Convert an RGB image to YCbCr, clamping each channel to [0, 255]."""
    rgb = validate_rgb(image)
    ycc = np.einsum("ck,kij->cij", RGB_TO_YCBCR, rgb) + YCBCR_OFFSET[:, None, None]
    return np.clip(ycc, 0.0, 255.0)


def ycbcr_to_rgb(image: np.ndarray) -> np.ndarray:
    """Convert a YCbCr image back to RGB, clamping each channel to [0, 255]."""
    ycc = validate_rgb(image)
    shifted = ycc - YCBCR_OFFSET[:, None, None]
    rgb = np.einsum("ck,kij->cij", YCBCR_TO_RGB, shifted)
    return np.clip(rgb, 0.0, 255.0)


def denoise_rgb(
    image: np.ndarray,
    params: ParamTriplet,
    seed: int = 0,
    oversample: int = 10,
    timings: dict | None = None,
) -> np.ndarray:
    """Denoise an RGB image channel-wise in YCbCr space.

    Y, Cb, and Cr are denoised independently with their own parameters and
    deterministic per-channel seeds (master seed + 1, + 2, + 3), then
    converted back to RGB.
    """
    ycc = rgb_to_ycbcr(image)
    channel_params = (params.y, params.cb, params.cr)
    denoised = np.empty_like(ycc)
    for index, (name, cp) in enumerate(zip(("y", "cb", "cr"), channel_params)):
        channel_timings = None if timings is None else timings.setdefault(name, {})
        denoised[index] = denoise_channel(
            ycc[index],
            cp,
            seed=(seed + 1 + index) % _SEED_MODULUS,
            oversample=oversample,
            timings=channel_timings,
        )
    return ycbcr_to_rgb(denoised)
