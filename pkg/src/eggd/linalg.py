"""Dense linear algebra: Gramian centering, QR, exact SVD, and randomized SVD."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from threadpoolctl import threadpool_limits

_RANK_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SingularTriplets:
    """Leading singular triplets of a matrix, values sorted descending.

    ``left`` has shape (m, count) and ``right`` (n, count); column l of each
    pairs with ``values[l]``.
    """

    values: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def count(self) -> int:
        return self.values.shape[0]


def double_center(distances: np.ndarray) -> np.ndarray:
    """Transform a symmetric distance matrix into its centered Gramian.

    G[i, j] = -1/2 * (D[i, j] - rowmean_i - colmean_j + grandmean). Every row
    and column of the result sums to zero, and G is symmetric whenever D is.
    """
    d = np.asarray(distances, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("distance matrix contains non-finite entries")
    row_means = d.mean(axis=1, keepdims=True)
    col_means = d.mean(axis=0, keepdims=True)
    grand_mean = d.mean()
    return -0.5 * (d - row_means - col_means + grand_mean)


def qr_orthonormalize(y: np.ndarray, drop_dependent: bool = True) -> np.ndarray:
    """Orthonormal basis for the column span of ``y`` via QR factorization.

    With ``drop_dependent`` (the default), numerically dependent columns are
    detected by column-pivoted QR at relative tolerance 1e-10 and removed, so
    the result may have fewer columns than ``y``; a warning reports the drop.
    With ``drop_dependent=False`` the full Householder Q factor is returned,
    whose trailing columns complete the span to an orthonormal set even when
    ``y`` is rank deficient.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {y.shape}")
    if y.shape[1] > y.shape[0]:
        raise ValueError(f"more columns than rows in shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise ValueError("matrix contains non-finite entries")
    q, r = np.linalg.qr(y, mode="reduced")
    if not drop_dependent:
        return q
    diag = np.abs(np.diag(r))
    scale = diag.max(initial=0.0)
    if scale == 0.0:
        raise ValueError("matrix has no independent columns")
    if diag.min() > _RANK_TOLERANCE * scale:
        return q
    # Unpivoted QR found a dependency; pivoting isolates the independent set.
    q_piv, r_piv, _ = scipy.linalg.qr(y, mode="economic", pivoting=True)
    diag_piv = np.abs(np.diag(r_piv))
    rank = int(np.count_nonzero(diag_piv > _RANK_TOLERANCE * diag_piv[0]))
    warnings.warn(
        f"dropped {y.shape[1] - rank} numerically dependent column(s) during "
        "orthonormalization",
        stacklevel=2,
    )
    return np.ascontiguousarray(q_piv[:, :rank])


def exact_svd(a: np.ndarray) -> SingularTriplets:
    """Thin SVD of a dense matrix with singular values sorted descending."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    with threadpool_limits(limits=1):
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    return SingularTriplets(values=s, left=u, right=vt.T)


def rsvd(a: np.ndarray, rank: int, oversample: int = 10, seed: int = 0) -> SingularTriplets:
    """Randomized SVD: Gaussian sketch, QR range finder, small exact SVD.

    Stage one draws a Gaussian test matrix with ``rank + oversample`` columns
    from the seeded generator, sketches Y = A @ Omega, and orthonormalizes it
    into Q. Stage two decomposes B = Q.T @ A exactly and maps the left factor
    back through Q. Returns the leading ``rank`` triplets.

    The full orthonormal Q factor is kept even when the sketch is numerically
    rank deficient: surplus directions only ever contribute trailing
    near-zero triplets, and keeping them makes the returned right vectors a
    complete orthonormal basis when ``rank`` equals the full dimension.

    Output is bitwise reproducible for fixed arguments: the sketch is drawn
    sequentially from the seed and all products run on a single BLAS thread.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    m, n = a.shape
    if not 1 <= rank <= min(m, n):
        raise ValueError(f"rank must be in [1, {min(m, n)}], got {rank}")
    if oversample < 0:
        raise ValueError(f"oversample must be >= 0, got {oversample}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")

    sketch_width = min(rank + oversample, m)
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((n, sketch_width))
    with threadpool_limits(limits=1):
        y = a @ omega
        q = qr_orthonormalize(y, drop_dependent=False)
        b = q.T @ a
        small = exact_svd(b)
        left = q @ small.left
    return SingularTriplets(
        values=small.values[:rank].copy(),
        left=np.ascontiguousarray(left[:, :rank]),
        right=np.ascontiguousarray(small.right[:, :rank]),
    )
