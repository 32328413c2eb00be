"""Nearest-neighbor graph over the patch cloud and exact geodesic distances.

Vertices are patches (rows of the patch matrix), edge weights are Euclidean
patch distances, and geodesics are exact all-pairs shortest paths computed by
per-source Dijkstra over the sparse graph. Results are identical to running
Floyd's algorithm on the same graph, at a fraction of the cost.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, prange
from scipy import sparse
from scipy.sparse.csgraph import connected_components
from threadpoolctl import threadpool_limits

from .errors import DisconnectedGraphError

_KNN_BLOCK_ROWS = 512


@dataclass(frozen=True)
class PatchGraph:
    """Symmetric weighted graph stored as CSR adjacency.

    Zero-weight edges (duplicate patches) are kept as explicit entries, so
    ``adjacency.nnz`` counts directed edges including zeros.
    """

    vertex_count: int
    adjacency: sparse.csr_matrix

    @property
    def edge_count(self) -> int:
        """Number of undirected edges."""
        return self.adjacency.nnz // 2

    def neighbors(self, vertex: int) -> tuple[np.ndarray, np.ndarray]:
        """Neighbor indices and edge weights of one vertex."""
        lo, hi = self.adjacency.indptr[vertex], self.adjacency.indptr[vertex + 1]
        return self.adjacency.indices[lo:hi], self.adjacency.data[lo:hi]


def patch_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean distance between two patch vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"patch length mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def _delta_smallest(row: np.ndarray, delta: int) -> np.ndarray:
    """Indices of the delta smallest entries, ties at the cut broken by lower index."""
    threshold = np.partition(row, delta - 1)[delta - 1]
    below = np.flatnonzero(row < threshold)
    at = np.flatnonzero(row == threshold)
    return np.concatenate([below, at[: delta - below.size]])


def build_knn_graph(patches: np.ndarray, delta: int) -> PatchGraph:
    """Connect every patch to its delta nearest patches by Euclidean distance.

    The directed delta-nearest relation is symmetrized by union: the
    undirected edge (a, b) exists when a lists b or b lists a. Ties at the
    delta-th distance are broken toward the lower vertex index. Duplicate
    patches produce explicit zero-weight edges.
    """
    patches = np.asarray(patches, dtype=np.float64)
    if patches.ndim != 2:
        raise ValueError(f"patch matrix must be 2-D, got shape {patches.shape}")
    count = patches.shape[0]
    if not isinstance(delta, (int, np.integer)) or delta <= 0:
        raise ValueError(f"neighbor count must be a positive integer, got {delta}")
    if delta >= count:
        raise ValueError(f"neighbor count {delta} must be smaller than vertex count {count}")

    sources = []
    targets = []
    weights = []
    sq_norms = np.einsum("ij,ij->i", patches, patches)
    # Single-threaded BLAS keeps the distances, hence the neighbor sets,
    # independent of the ambient thread configuration.
    with threadpool_limits(limits=1):
        for lo in range(0, count, _KNN_BLOCK_ROWS):
            hi = min(lo + _KNN_BLOCK_ROWS, count)
            block = sq_norms[lo:hi, None] + sq_norms[None, :] - 2.0 * (patches[lo:hi] @ patches.T)
            np.maximum(block, 0.0, out=block)
            block[np.arange(hi - lo), np.arange(lo, hi)] = np.inf
            for r in range(hi - lo):
                chosen = _delta_smallest(block[r], delta)
                sources.append(np.full(chosen.size, lo + r, dtype=np.int64))
                targets.append(chosen.astype(np.int64))
                weights.append(np.sqrt(block[r, chosen]))
    src = np.concatenate(sources)
    dst = np.concatenate(targets)
    dist = np.concatenate(weights)
    return _symmetric_graph(count, src, dst, dist)


def _symmetric_graph(
    count: int, src: np.ndarray, dst: np.ndarray, dist: np.ndarray
) -> PatchGraph:
    """Union-symmetrize directed edges into a CSR graph, preserving zero weights."""
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    key = lo * count + hi
    order = np.argsort(key, kind="stable")
    key = key[order]
    keep = np.ones(key.size, dtype=bool)
    keep[1:] = key[1:] != key[:-1]
    u, v, w = lo[order][keep], hi[order][keep], dist[order][keep]
    adjacency = sparse.coo_matrix(
        (np.concatenate([w, w]), (np.concatenate([u, v]), np.concatenate([v, u]))),
        shape=(count, count),
    ).tocsr()
    return PatchGraph(vertex_count=count, adjacency=adjacency)


def ensure_connected(graph: PatchGraph, patches: np.ndarray) -> tuple[PatchGraph, int]:
    """Bridge graph components with the shortest available Euclidean edges.

    While more than one component remains, the globally shortest patch
    distance between two distinct components is added as an edge. A graph with
    k components gains exactly k - 1 edges; an already-connected graph is
    returned unchanged with count 0.
    """
    patches = np.asarray(patches, dtype=np.float64)
    if patches.shape[0] != graph.vertex_count:
        raise ValueError("patch matrix does not match graph vertex count")
    n_components, labels = connected_components(graph.adjacency, directed=False)
    if n_components <= 1:
        return graph, 0

    adjacency = graph.adjacency.tolil(copy=True)
    sq_norms = np.einsum("ij,ij->i", patches, patches)
    added = 0
    with threadpool_limits(limits=1):
        while n_components > 1:
            best = (np.inf, -1, -1)
            for lo in range(0, graph.vertex_count, _KNN_BLOCK_ROWS):
                hi = min(lo + _KNN_BLOCK_ROWS, graph.vertex_count)
                block = (
                    sq_norms[lo:hi, None] + sq_norms[None, :] - 2.0 * (patches[lo:hi] @ patches.T)
                )
                np.maximum(block, 0.0, out=block)
                block[labels[lo:hi, None] == labels[None, :]] = np.inf
                r, c = np.unravel_index(np.argmin(block), block.shape)
                if block[r, c] < best[0]:
                    best = (block[r, c], lo + int(r), int(c))
            d2, a, b = best
            weight = float(np.sqrt(d2))
            adjacency[a, b] = weight
            adjacency[b, a] = weight
            labels[labels == labels[b]] = labels[a]
            added += 1
            n_components -= 1
    return PatchGraph(vertex_count=graph.vertex_count, adjacency=adjacency.tocsr()), added


@njit(cache=True)
def _dijkstra_single(indptr, indices, weights, source, dist, heap_node, heap_dist):
    """Binary-heap Dijkstra with lazy deletion; fills ``dist`` for one source."""
    n = dist.shape[0]
    for i in range(n):
        dist[i] = np.inf
    dist[source] = 0.0
    heap_node[0] = source
    heap_dist[0] = 0.0
    size = 1
    while size > 0:
        d = heap_dist[0]
        u = heap_node[0]
        size -= 1
        heap_dist[0] = heap_dist[size]
        heap_node[0] = heap_node[size]
        i = 0
        while True:
            left = 2 * i + 1
            right = left + 1
            smallest = i
            if left < size and heap_dist[left] < heap_dist[smallest]:
                smallest = left
            if right < size and heap_dist[right] < heap_dist[smallest]:
                smallest = right
            if smallest == i:
                break
            heap_dist[i], heap_dist[smallest] = heap_dist[smallest], heap_dist[i]
            heap_node[i], heap_node[smallest] = heap_node[smallest], heap_node[i]
            i = smallest
        if d > dist[u]:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            candidate = d + weights[e]
            if candidate < dist[v]:
                dist[v] = candidate
                j = size
                heap_dist[size] = candidate
                heap_node[size] = v
                size += 1
                while j > 0:
                    parent = (j - 1) // 2
                    if heap_dist[parent] <= heap_dist[j]:
                        break
                    heap_dist[parent], heap_dist[j] = heap_dist[j], heap_dist[parent]
                    heap_node[parent], heap_node[j] = heap_node[j], heap_node[parent]
                    j = parent


@njit(parallel=True, cache=True)
def _dijkstra_all_sources(indptr, indices, weights, n):
    out = np.empty((n, n), dtype=np.float64)
    heap_capacity = indices.shape[0] + n + 1
    for s in prange(n):
        heap_node = np.empty(heap_capacity, dtype=np.int64)
        heap_dist = np.empty(heap_capacity, dtype=np.float64)
        _dijkstra_single(indptr, indices, weights, s, out[s], heap_node, heap_dist)
    return out


def geodesic_distances(graph: PatchGraph) -> np.ndarray:
    """Exact all-pairs shortest-path distances of a connected graph.

    Runs Dijkstra from every source over the sparse adjacency (output
    identical to Floyd's algorithm). Sources are independent, so the result
    does not depend on the degree of parallelism. Raises
    :class:`DisconnectedGraphError` when the graph has several components.
    """
    n_components, _ = connected_components(graph.adjacency, directed=False)
    if n_components > 1:
        raise DisconnectedGraphError(
            f"graph has {n_components} components; run ensure_connected first"
        )
    adjacency = graph.adjacency
    distances = _dijkstra_all_sources(
        adjacency.indptr.astype(np.int64),
        adjacency.indices.astype(np.int64),
        adjacency.data.astype(np.float64),
        graph.vertex_count,
    )
    # Per-source rounding can leave d(a,b) and d(b,a) a few ulps apart; take
    # the smaller realized path sum so the matrix is exactly symmetric.
    return np.minimum(distances, distances.T)
