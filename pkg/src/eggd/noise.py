"""Additive Gaussian noise injection with relative-level targeting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

_TARGET_RELATIVE_TOLERANCE = 0.01
_MAX_PROBES = 40


@dataclass(frozen=True)
class NoiseSpec:
    """Noise amount as either an absolute sigma or a target relative level.

    Exactly one of ``sigma`` (standard deviation on the [0, 255] scale) and
    ``zeta_target`` (relative percentage) must be set.
    """

    sigma: float | None = None
    zeta_target: float | None = None
    seed: int = 0

    def __post_init__(self):
        if (self.sigma is None) == (self.zeta_target is None):
            raise ValueError("set exactly one of sigma and zeta_target")
        if self.sigma is not None and not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.zeta_target is not None and not 0.0 < self.zeta_target < 100.0:
            raise ValueError(f"zeta_target must be in (0, 100), got {self.zeta_target}")


def measure_zeta(clean: np.ndarray, noisy: np.ndarray) -> float:
    """Relative noise percentage: 100 * ||noisy - clean|| / ||clean||.

    Frobenius norms over all pixels and channels.
    """
    clean = np.asarray(clean, dtype=np.float64)
    noisy = np.asarray(noisy, dtype=np.float64)
    if clean.shape != noisy.shape:
        raise ValueError(f"shape mismatch: {clean.shape} vs {noisy.shape}")
    denominator = np.linalg.norm(clean.ravel())
    if denominator == 0.0:
        raise ZeroDivisionError("relative noise is undefined for an all-zero image")
    return float(100.0 * np.linalg.norm((noisy - clean).ravel()) / denominator)


def _draw(img: np.ndarray, sigma: float, seed: int, probe: int) -> np.ndarray:
    # Sub-streams per probe keep every draw fresh yet fully deterministic.
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(probe,)))
    noisy = img + rng.standard_normal(img.shape) * sigma
    return np.clip(noisy, 0.0, 255.0)


def add_gaussian_noise(
    img: np.ndarray, spec: NoiseSpec
) -> tuple[np.ndarray, float, float]:
    """Add clamped i.i.d. Gaussian noise; returns (noisy, achieved zeta, sigma).

    In sigma mode a single draw is made. In zeta-target mode the sigma is
    solved by bisection on the measured post-clamp zeta (1% relative
    tolerance, fresh sub-seeded draw per probe); clamping makes the map from
    sigma to zeta image-dependent, so no closed form exists. Unreachable
    targets fail with :class:`ConvergenceError` after the probe budget.
    """
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim not in (2, 3):
        raise ValueError(f"expected a channel or RGB image, got shape {arr.shape}")

    if spec.sigma is not None:
        noisy = _draw(arr, spec.sigma, spec.seed, 0)
        return noisy, measure_zeta(arr, noisy), spec.sigma

    target = spec.zeta_target
    rms = float(np.sqrt(np.mean(arr**2)))
    if rms == 0.0:
        raise ZeroDivisionError("relative noise is undefined for an all-zero image")

    # Pre-clamp, zeta ~= 100 * sigma / rms, and clamping only lowers it, so
    # this estimate seeds the bracket; the upper edge doubles until some
    # probe overshoots the target, then ordinary bisection takes over.
    low = 0.0
    high = target / 100.0 * rms
    bracketed = False
    closest = np.inf
    for probe in range(_MAX_PROBES):
        sigma = (low + high) / 2.0 if bracketed else high
        noisy = _draw(arr, sigma, spec.seed, probe)
        achieved = measure_zeta(arr, noisy)
        if abs(achieved - target) <= _TARGET_RELATIVE_TOLERANCE * target:
            return noisy, achieved, sigma
        closest = min(closest, abs(achieved - target))
        if achieved < target:
            low = sigma
            if not bracketed:
                high = 2.0 * sigma
        else:
            high = sigma
            bracketed = True
    raise ConvergenceError(
        f"could not reach zeta={target}% within {_MAX_PROBES} probes "
        f"(got within {closest:.4g} points); the target may exceed what "
        "clamping allows for this image"
    )
