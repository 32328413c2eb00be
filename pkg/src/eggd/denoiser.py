"""Single-channel denoising pipeline.

Patches of the noisy channel form a point cloud whose geodesic structure is
summarized by the centered Gramian of shortest-path distances; projecting the
patch cloud onto the Gramian's leading right singular vectors suppresses the
noise directions, and Shepard merging rebuilds the channel.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .graph import build_knn_graph, ensure_connected, geodesic_distances
from .linalg import double_center, rsvd
from .patches import extract_patches, merge_patches, validate_channel

_ZERO_SINGULAR_VALUE = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Per-channel tuning knobs: patch length, neighbor count, basis size."""

    rho: int
    delta: int
    rank: int

    def __post_init__(self):
        if self.rho % 2 == 0 or self.rho < 3:
            raise ValueError(f"patch length must be odd and >= 3, got {self.rho}")
        if self.delta < 1:
            raise ValueError(f"neighbor count must be >= 1, got {self.delta}")
        if self.rank < 1:
            raise ValueError(f"singular vector count must be >= 1, got {self.rank}")

    def validate_for_side(self, n: int) -> None:
        """Check the parameters against a concrete image side length."""
        if self.rho >= n:
            raise ValueError(f"patch length {self.rho} must be smaller than image side {n}")
        if self.delta >= n * n:
            raise ValueError(f"neighbor count {self.delta} must be smaller than {n * n}")
        if self.rank > n * n:
            raise ValueError(f"singular vector count {self.rank} exceeds pixel count {n * n}")


def project_patches(patches: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Orthogonal projection of the patch matrix onto the basis columns.

    Returns basis @ basis.T @ patches; each patch-coordinate column is
    projected onto the span of the basis vectors. Idempotent and
    non-expansive in Frobenius norm.
    """
    patches = np.asarray(patches, dtype=np.float64)
    basis = np.asarray(basis, dtype=np.float64)
    if patches.ndim != 2 or basis.ndim != 2:
        raise ValueError("patches and basis must be 2-D")
    if basis.shape[0] != patches.shape[0]:
        raise ValueError(
            f"basis vectors of length {basis.shape[0]} do not match "
            f"{patches.shape[0]} patch rows"
        )
    with threadpool_limits(limits=1):
        return basis @ (basis.T @ patches)


def denoise_channel(
    noisy: np.ndarray,
    params: ChannelParams,
    seed: int = 0,
    oversample: int = 10,
    timings: dict | None = None,
) -> np.ndarray:
    """Denoise one square channel and clamp the result to [0, 255].

    Stages: patch extraction, delta-nearest-neighbor graph (bridged if it
    comes out disconnected), all-pairs geodesics, Gramian centering,
    randomized SVD for the leading right singular vectors, projection of the
    patch cloud, Shepard merge.

    The projection runs on the mean-centered patch matrix and the mean patch
    is added back afterwards. The Gramian's rows sum to zero, so its singular
    vectors are orthogonal to the constant direction and a raw projection
    would strip the mean intensity from every patch; centering makes the
    operation a proper low-rank reconstruction of the cloud around its mean.

    Fixed seeds yield bitwise-identical output regardless of thread count.
    Pass a dict as ``timings`` to collect per-stage wall-clock seconds.
    """
    channel = validate_channel(noisy)
    n = channel.shape[0]
    params.validate_for_side(n)

    stages = {} if timings is None else timings
    start = time.perf_counter()
    patches = extract_patches(channel, params.rho)
    graph = build_knn_graph(patches, params.delta)
    graph, _ = ensure_connected(graph, patches)
    stages["graph"] = time.perf_counter() - start

    start = time.perf_counter()
    distances = geodesic_distances(graph)
    stages["geodesics"] = time.perf_counter() - start

    start = time.perf_counter()
    gramian = double_center(distances)
    triplets = rsvd(gramian, params.rank, oversample=oversample, seed=seed)
    nonzero = int(np.count_nonzero(triplets.values > _ZERO_SINGULAR_VALUE * triplets.values[0]))
    if nonzero < params.rank:
        warnings.warn(
            f"requested {params.rank} singular vectors but only {nonzero} have "
            "numerically nonzero singular values; projection keeps the full basis",
            stacklevel=2,
        )
    stages["rsvd"] = time.perf_counter() - start

    start = time.perf_counter()
    mean_patch = patches.mean(axis=0, keepdims=True)
    denoised_patches = project_patches(patches - mean_patch, triplets.right) + mean_patch
    stages["projection"] = time.perf_counter() - start

    start = time.perf_counter()
    merged = merge_patches(denoised_patches)
    stages["merge"] = time.perf_counter() - start
    return np.clip(merged, 0.0, 255.0)
