"""Patch extraction and Shepard-weighted reconstruction for square channels.

A channel is an n-by-n float array with intensities in [0, 255]. Every pixel
is the center of one rho-by-rho patch (reflect padding supplies out-of-image
values), so an n-by-n channel yields an (n*n, rho*rho) patch matrix whose row
k corresponds to pixel (k // n, k % n) and holds the patch in row-major order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def validate_channel(channel: np.ndarray) -> np.ndarray:
    """Check channel invariants and return a float64 copy-free view.

    The channel must be a square 2-D array of finite values in [0, 255].
    """
    arr = np.asarray(channel, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"channel must be 2-D, got shape {arr.shape}")
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"channel must be square, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("channel is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("channel contains non-finite values")
    if arr.min() < 0.0 or arr.max() > 255.0:
        raise ValueError("channel intensities must lie in [0, 255]")
    return arr


def _check_patch_length(rho: int, n: int) -> None:
    if rho % 2 == 0 or rho < 3:
        raise ValueError(f"patch length must be odd and >= 3, got {rho}")
    if rho >= n:
        raise ValueError(f"patch length {rho} must be smaller than image side {n}")


def extract_patches(channel: np.ndarray, rho: int) -> np.ndarray:
    """Extract all n*n overlapping rho-by-rho patches of a square channel.

    Out-of-image pixels are filled by mirror reflection without repeating the
    edge pixel. Returns an (n*n, rho*rho) float64 matrix; row k is the
    row-major vectorization of the patch centered at pixel k.
    """
    arr = validate_channel(channel)
    n = arr.shape[0]
    _check_patch_length(rho, n)
    half = rho // 2
    padded = np.pad(arr, half, mode="reflect")
    windows = np.lib.stride_tricks.sliding_window_view(padded, (rho, rho))
    return windows.reshape(n * n, rho * rho).copy()


@dataclass(frozen=True)
class PixelNeighborhood:
    """Pixels within Chebyshev distance rho/2 of a center pixel, clipped to the image."""

    center: tuple[int, int]
    members: tuple[tuple[int, int], ...]

    def __contains__(self, pixel: tuple[int, int]) -> bool:
        return tuple(pixel) in self.members


def pixel_neighborhood(center: tuple[int, int], rho: int, n: int) -> PixelNeighborhood:
    """Build the neighborhood of patch centers that overlap ``center``.

    Members are all in-image pixels t with max(|ci - ti|, |cj - tj|) <= rho // 2.
    Interior centers have exactly rho*rho members; near the border the set is
    clipped to the image.
    """
    if rho % 2 == 0 or rho < 1:
        raise ValueError(f"patch length must be odd and >= 1, got {rho}")
    ci, cj = center
    if not (0 <= ci < n and 0 <= cj < n):
        raise ValueError(f"center {center} outside {n}x{n} image")
    half = rho // 2
    members = tuple(
        (i, j)
        for i in range(max(0, ci - half), min(n, ci + half + 1))
        for j in range(max(0, cj - half), min(n, cj + half + 1))
    )
    return PixelNeighborhood(center=(ci, cj), members=members)


def shepard_weight(
    center: tuple[int, int], t: tuple[int, int], neighborhood: PixelNeighborhood
) -> float:
    """Normalized exp(-squared pixel distance) weight of contributor ``t``.

    The weight of t among the neighborhood members is
    exp(-||center - t||^2) / sum over members t' of exp(-||center - t'||^2),
    with Euclidean distances in pixel units. Weights over the whole
    neighborhood sum to one.
    """
    if tuple(t) not in neighborhood:
        raise ValueError(f"pixel {t} is not in the neighborhood of {neighborhood.center}")
    ci, cj = neighborhood.center
    total = 0.0
    target = 0.0
    for (mi, mj) in neighborhood.members:
        w = math.exp(-((ci - mi) ** 2 + (cj - mj) ** 2))
        total += w
        if (mi, mj) == tuple(t):
            target = w
    return target / total


def merge_patches(patches: np.ndarray) -> np.ndarray:
    """Recombine an (n*n, rho*rho) patch matrix into an n-by-n channel.

    Each output pixel is the Shepard-weighted average of the estimates the
    overlapping patches hold for it, weighted by exp(-squared distance) of the
    contributing patch center. Contributors whose center falls outside the
    image are dropped and the weights renormalized, so every pixel is a convex
    combination of real estimates.
    """
    patches = np.asarray(patches, dtype=np.float64)
    if patches.ndim != 2:
        raise ValueError(f"patch matrix must be 2-D, got shape {patches.shape}")
    n = math.isqrt(patches.shape[0])
    rho = math.isqrt(patches.shape[1])
    if n * n != patches.shape[0] or rho * rho != patches.shape[1]:
        raise ValueError(f"patch matrix shape {patches.shape} is not (n^2, rho^2)")
    if rho % 2 == 0:
        raise ValueError(f"inferred patch length {rho} is even")
    half = rho // 2
    grid = patches.reshape(n, n, rho, rho)
    numerator = np.zeros((n, n))
    denominator = np.zeros((n, n))
    # Fixed offset iteration order keeps per-pixel summation deterministic.
    for di in range(-half, half + 1):
        for dj in range(-half, half + 1):
            w = math.exp(-(di * di + dj * dj))
            # Patch centered at (i + di, j + dj) holds pixel (i, j) at
            # internal position (half - di, half - dj).
            src_i = slice(max(0, di), n + min(0, di))
            dst_i = slice(max(0, -di), n + min(0, -di))
            src_j = slice(max(0, dj), n + min(0, dj))
            dst_j = slice(max(0, -dj), n + min(0, -dj))
            numerator[dst_i, dst_j] += w * grid[src_i, src_j, half - di, half - dj]
            denominator[dst_i, dst_j] += w
    return numerator / denominator
