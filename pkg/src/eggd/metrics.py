"""Image quality metrics: Shannon entropy, RMSE, PSNR, and global SSIM.

All functions accept a single channel (n, n) or a channel-major RGB image
(3, n, n). Entropy pools one histogram over every channel value, PSNR pools
the squared error over all channels, and SSIM averages per-channel values.
SSIM is the global single-window variant: one set of whole-image statistics,
no sliding window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SSIM_C1 = (0.01 * 255.0) ** 2
SSIM_C2 = (0.03 * 255.0) ** 2
SSIM_C3 = SSIM_C2 / 2.0


@dataclass(frozen=True)
class MetricsReport:
    """Quality metrics of an image, reference-based fields optional."""

    she: float
    rmse: float | None = None
    psnr: float | None = None
    ssim: float | None = None

    def to_document(self) -> dict[str, str]:
        """Flat key-value form; infinite PSNR serializes as the string 'inf'."""
        doc = {"she": repr(self.she)}
        if self.rmse is not None:
            doc["rmse"] = repr(self.rmse)
        if self.psnr is not None:
            doc["psnr"] = "inf" if math.isinf(self.psnr) else repr(self.psnr)
        if self.ssim is not None:
            doc["ssim"] = repr(self.ssim)
        return doc


def _as_image(img: np.ndarray) -> np.ndarray:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim not in (2, 3):
        raise ValueError(f"expected a channel or RGB image, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("image is empty")
    return arr


def _check_same_shape(reference: np.ndarray, test: np.ndarray) -> None:
    if reference.shape != test.shape:
        raise ValueError(f"shape mismatch: {reference.shape} vs {test.shape}")


def shannon_entropy(img: np.ndarray) -> float:
    """Entropy in bits of the 8-bit intensity histogram, in [0, 8].

    Intensities are quantized to 256 levels by round-half-up; for RGB input
    the histogram pools all three channels.
    """
    arr = _as_image(img)
    levels = np.floor(arr + 0.5).clip(0, 255).astype(np.int64)
    counts = np.bincount(levels.ravel(), minlength=256)
    p = counts[counts > 0] / levels.size
    return float(-(p * np.log2(p)).sum())


def rmse(reference: np.ndarray, test: np.ndarray) -> float:
    """Root mean square pixel difference."""
    ref = _as_image(reference)
    tst = _as_image(test)
    _check_same_shape(ref, tst)
    return float(np.sqrt(np.mean((ref - tst) ** 2)))


def psnr(reference: np.ndarray, test: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB against a 255 peak; inf at zero error.

    For RGB input the squared error is pooled over all three channels.
    """
    error = rmse(reference, test)
    if error == 0.0:
        return math.inf
    return 20.0 * math.log10(255.0 / error)


def _ssim_channel(reference: np.ndarray, test: np.ndarray) -> float:
    mean_r = reference.mean()
    mean_t = test.mean()
    # Population statistics (divisor N) over the whole image.
    std_r = reference.std()
    std_t = test.std()
    covariance = ((reference - mean_r) * (test - mean_t)).mean()
    luminance = (2.0 * mean_r * mean_t + SSIM_C1) / (mean_r**2 + mean_t**2 + SSIM_C1)
    contrast = (2.0 * std_r * std_t + SSIM_C2) / (std_r**2 + std_t**2 + SSIM_C2)
    structure = (covariance + SSIM_C3) / (std_r * std_t + SSIM_C3)
    return float(luminance * contrast * structure)


def ssim(reference: np.ndarray, test: np.ndarray) -> float:
    """Global structural similarity: luminance * contrast * correlation.

    Whole-image means, population standard deviations, and covariance feed
    the three factors; RGB images are scored per channel and averaged.
    """
    ref = _as_image(reference)
    tst = _as_image(test)
    _check_same_shape(ref, tst)
    if ref.ndim == 2:
        return _ssim_channel(ref, tst)
    return float(np.mean([_ssim_channel(r, t) for r, t in zip(ref, tst)]))


def report(test: np.ndarray, reference: np.ndarray | None = None) -> MetricsReport:
    """Metrics of ``test``; RMSE, PSNR, and SSIM only when a reference is given."""
    entropy = shannon_entropy(test)
    if reference is None:
        return MetricsReport(she=entropy)
    return MetricsReport(
        she=entropy,
        rmse=rmse(reference, test),
        psnr=psnr(reference, test),
        ssim=ssim(reference, test),
    )
