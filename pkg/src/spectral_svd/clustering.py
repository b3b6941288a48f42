"""Random-walk spectral clustering: embedding, k-means and normalized cut."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCluster, KOutOfRange, LabelOutOfRange
from .graph import ValidatedGraph
from .linalg import SortConvention, evd_random_walk

DEFAULT_RESTARTS = 10
DEFAULT_MAX_ITERATIONS = 300
DEFAULT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SpectralEmbedding:
    """First ``k`` eigenvectors of ``L_rw`` (smallest eigenvalues) as columns."""

    matrix: np.ndarray
    eigenvalues: np.ndarray

    @property
    def k(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    k: int
    inertia: float
    iterations: int
    ncut: float = float("nan")
    seed: int = 0
    inertia_history: tuple = field(default=(), repr=False)


def spectral_embedding(graph: ValidatedGraph, k: int) -> SpectralEmbedding:
    n = graph.num_nodes
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise KOutOfRange(k, 1, n)
    evd = evd_random_walk(graph, SortConvention.VALUE_ASC, target="L_rw")
    matrix = np.ascontiguousarray(evd.eigenvectors[:, :k])
    values = evd.eigenvalues[:k].copy()
    matrix.setflags(write=False)
    values.setflags(write=False)
    return SpectralEmbedding(matrix, values)


def _sq_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _kmeans_pp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding; falls back to the lowest unchosen index when all
    remaining points coincide with a centre."""
    n = len(points)
    chosen = [int(rng.integers(n))]
    closest = _sq_distances(points, points[chosen])[:, 0]
    for _ in range(1, k):
        total = float(closest.sum())
        if total > 0.0:
            cumulative = np.cumsum(closest)
            idx = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
            idx = min(idx, n - 1)
            # never land on a zero-weight point through rounding
            while closest[idx] == 0.0:
                idx -= 1
        else:
            idx = next(i for i in range(n) if i not in chosen)
        chosen.append(idx)
        closest = np.minimum(closest, _sq_distances(points, points[[idx]])[:, 0])
    return points[chosen].copy()


def _repair_empty(points, labels, centroids, k):
    """Move the point farthest from its centroid into each empty cluster."""
    for c in range(k):
        if np.any(labels == c):
            continue
        d = np.sum((points - centroids[labels]) ** 2, axis=1)
        sizes = np.bincount(labels, minlength=k)
        d[sizes[labels] <= 1] = -1.0  # never empty another cluster
        far = int(np.argmax(d))
        labels[far] = c
        centroids[c] = points[far]
    return labels


def _lloyd(points, k, rng, max_iterations, tolerance):
    centroids = _kmeans_pp(points, k, rng)
    history = []
    labels = None
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        # argmin returns the lowest centroid index on exact ties
        labels = np.argmin(_sq_distances(points, centroids), axis=1)
        labels = _repair_empty(points, labels, centroids, k)
        new = np.array([points[labels == c].mean(axis=0) for c in range(k)])
        shift = float(np.max(np.linalg.norm(new - centroids, axis=1)))
        centroids = new
        history.append(float(np.sum((points - centroids[labels]) ** 2)))
        if shift <= tolerance:
            break
    return labels, centroids, history, iterations


def kmeans(
    points,
    k: int,
    seed: int = 0,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tolerance: float = DEFAULT_TOLERANCE,
    restarts: int = DEFAULT_RESTARTS,
) -> ClusterAssignment:
    """Lloyd's algorithm with k-means++ seeding and ``restarts`` independent runs.

    Restart ``r`` uses its own PCG64 stream spawned from ``seed``; the run with
    the lowest inertia wins, ties going to the lowest restart index.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n = len(points)
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise KOutOfRange(k, 1, n)
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")

    streams = np.random.SeedSequence(seed).spawn(restarts)
    best = None
    for stream in streams:
        rng = np.random.Generator(np.random.PCG64(stream))
        labels, _, history, iterations = _lloyd(points, k, rng, max_iterations, tolerance)
        if best is None or history[-1] < best[2][-1]:
            best = (labels, iterations, history)
    labels, iterations, history = best
    labels = labels.astype(int)
    labels.setflags(write=False)
    return ClusterAssignment(
        labels=labels,
        k=int(k),
        inertia=history[-1],
        iterations=iterations,
        seed=int(seed),
        inertia_history=tuple(history),
    )


def normalized_cut(graph: ValidatedGraph, labels, k: int | None = None) -> float:
    """Sum over clusters of cut(C, complement) / vol(C).

    Cluster ids must be ``0..k-1`` (``k`` defaults to ``max(labels) + 1``) and
    every cluster must be non-empty.
    """
    labels = np.asarray(labels)
    n = graph.num_nodes
    if labels.shape != (n,):
        raise LabelOutOfRange(f"expected {n} labels, got shape {labels.shape}")
    if not np.issubdtype(labels.dtype, np.integer) or (n and labels.min() < 0):
        raise LabelOutOfRange("labels must be non-negative integers")
    if k is None:
        k = int(labels.max()) + 1
    elif labels.max() >= k:
        raise LabelOutOfRange(f"label {int(labels.max())} outside [0, {k})")
    total = 0.0
    for c in range(k):
        inside = labels == c
        if not np.any(inside):
            raise EmptyCluster(f"cluster {c} has no members")
        vol = float(graph.degrees[inside].sum())
        cut = float(graph.adjacency[np.ix_(inside, ~inside)].sum())
        total += cut / vol
    return total


def spectral_cluster(graph: ValidatedGraph, k: int, seed: int = 0, **kmeans_kw) -> ClusterAssignment:
    """Embed with the ``k`` smallest ``L_rw`` eigenvectors, then k-means the rows."""
    n = graph.num_nodes
    if not isinstance(k, (int, np.integer)) or not 2 <= k <= n:
        raise KOutOfRange(k, 2, n)
    embedding = spectral_embedding(graph, k)
    result = kmeans(embedding.matrix, k, seed=seed, **kmeans_kw)
    ncut = normalized_cut(graph, result.labels, k)
    return ClusterAssignment(
        labels=result.labels,
        k=result.k,
        inertia=result.inertia,
        iterations=result.iterations,
        ncut=ncut,
        seed=result.seed,
        inertia_history=result.inertia_history,
    )
