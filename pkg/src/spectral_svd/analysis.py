"""Numerical checks relating spectral clustering, EVD and SVD.

* ``verify_theorem1``: rank-k SVD vs |lambda|-sorted rank-k EVD of a matrix.
* ``verify_theorem2``: is the spectral-clustering reconstruction the best
  rank-k approximation, and does that coincide with the top-k (by magnitude)
  eigenvalues all being positive?
* sign statistics, the ``L_rw`` / ``A_rw`` correspondence and smoothness.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import asdict, dataclass

import numpy as np

from . import graph as g
from .clustering import spectral_embedding
from .errors import ComplexSpectrumSuspected, ConvergenceFailure, KOutOfRange, ZeroSignal
from .linalg import (
    RESIDUAL_TOL,
    ZERO_TOL,
    SortConvention,
    SpectralDecomposition,
    SvdResult,
    as_matrix,
    best_rank_k_error,
    evd_random_walk,
    frobenius_distance,
    frobenius_norm,
    rank_k_reconstruction,
    residuals,
    svd,
    symmetric_evd,
)

DEFAULT_TOLERANCE = 1e-8


class TheoremId(str, enum.Enum):
    THM1 = "THM1"
    THM2 = "THM2"


class Verdict(str, enum.Enum):
    EQUAL = "EQUAL"
    NOT_EQUAL = "NOT_EQUAL"


class BasisSource(str, enum.Enum):
    SC_BASES = "SC_BASES"
    SVD_BASES = "SVD_BASES"


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of one theorem check at one ``k``.

    For THM1 ``gap`` is the Frobenius distance between the rank-k SVD and
    rank-k EVD reconstructions and ``condition_holds`` records whether the
    eigenvalues are pairwise distinct. For THM2 ``gap`` is
    ``|sc_reconstruction_error - best_error|`` and ``condition_holds`` whether
    the k largest-magnitude eigenvalues are all positive. ``matrix`` names
    the matrix the errors are measured against.
    """

    theorem_id: TheoremId
    k: int
    condition_holds: bool
    has_abs_tie_at_k: bool
    evd_reconstruction_error: float
    svd_reconstruction_error: float
    sc_reconstruction_error: float | None
    best_error: float
    gap: float
    verdict: Verdict
    tolerance: float
    matrix: str = "input"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["theorem_id"] = self.theorem_id.value
        d["verdict"] = self.verdict.value
        return d


@dataclass(frozen=True)
class SpectrumStats:
    n: int
    num_positive: int
    num_negative: int
    num_zero: int
    zero_tolerance: float
    positive_fraction: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SmoothnessReport:
    """Smoothness of selected bases; ``eigenvalues`` are the matching L_rw
    eigenvalues and ``a_rw_eigenvalues`` the A_rw ones (``1 - eigenvalue``)."""

    basis_source: BasisSource
    eigenvalues: tuple
    a_rw_eigenvalues: tuple
    smoothness: tuple

    @property
    def per_basis(self) -> list[tuple[float, float]]:
        return list(zip(self.eigenvalues, self.smoothness))

    def to_dict(self) -> dict:
        return {
            "basis_source": self.basis_source.value,
            "eigenvalues": list(self.eigenvalues),
            "a_rw_eigenvalues": list(self.a_rw_eigenvalues),
            "smoothness": list(self.smoothness),
        }


def _check_k(k, n):
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise KOutOfRange(k, 1, n)


def _abs_tie_at_k(values: np.ndarray, k: int, tolerance: float) -> bool:
    """|lambda_k| and |lambda_{k+1}| within ``tolerance`` (ABS_DESC order)."""
    if k >= len(values):
        return False
    return bool(abs(abs(values[k - 1]) - abs(values[k])) <= tolerance)


# ---------------------------------------------------------------------------
# Theorem 1

def symmetrizer(matrix: np.ndarray, rtol: float = 1e-12) -> np.ndarray | None:
    """Positive ``d`` with ``diag(d) @ M`` symmetric, or None if there is none.

    ``A_rw = D^-1 A`` gives back the degrees up to a per-component scale.
    """
    m = np.asarray(matrix, dtype=float)
    n = m.shape[0]
    nz = m != 0
    if np.any(nz != nz.T):
        return None
    ratio = np.ones_like(m)
    ratio[nz] = m[nz] / m.T[nz]  # d_j = d_i * M_ij / M_ji
    if np.any(ratio[nz] <= 0):
        return None
    d = np.zeros(n)
    for root in range(n):
        if d[root]:
            continue
        d[root] = 1.0
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(nz[i]):
                if not d[j]:
                    d[j] = d[i] * ratio[i, j]
                    queue.append(j)
    dm = d[:, None] * m
    if np.max(np.abs(dm - dm.T)) > rtol * max(np.max(np.abs(dm)), 1e-300):
        return None
    return d


def real_spectrum_evd(matrix, convention=SortConvention.ABS_DESC) -> SpectralDecomposition:
    """EVD of a symmetric matrix, or of one made symmetric by a diagonal
    similarity (e.g. ``A_rw``). Anything else raises ComplexSpectrumSuspected."""
    m = as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise ComplexSpectrumSuspected("matrix is not square")
    if np.max(np.abs(m - m.T)) <= 1e-12:
        return symmetric_evd(m, convention)
    d = symmetrizer(m)
    if d is None:
        raise ComplexSpectrumSuspected(
            "matrix is neither symmetric nor diagonally symmetrizable; "
            "its spectrum need not be real"
        )
    root = np.sqrt(d)
    similar = root[:, None] * m / root[None, :]
    similar = 0.5 * (similar + similar.T)
    try:
        sym = symmetric_evd(similar, convention)
    except ConvergenceFailure as exc:
        raise ComplexSpectrumSuspected(str(exc)) from exc
    x = sym.eigenvectors / root[:, None]
    x = x / np.linalg.norm(x, axis=0)
    idx = np.argmax(np.abs(x), axis=0)
    x = x * np.where(x[idx, np.arange(x.shape[1])] < 0, -1.0, 1.0)
    worst = float(np.max(residuals(m, sym.eigenvalues, x)))
    if worst > RESIDUAL_TOL * frobenius_norm(m):
        raise ComplexSpectrumSuspected(f"eigenpair residual {worst:.3e} too large")
    x.setflags(write=False)
    return SpectralDecomposition(sym.eigenvalues, x, sym.sort_convention, False)


def _theorem1_report(m, evd, svd_res, k, tolerance, matrix_name):
    evd_rec = rank_k_reconstruction(evd, k)
    svd_rec = rank_k_reconstruction(svd_res, k)
    gap = frobenius_distance(svd_rec, evd_rec)
    values = np.sort(evd.eigenvalues)
    distinct = bool(len(values) < 2 or np.min(np.diff(values)) > tolerance)
    return TheoremReport(
        theorem_id=TheoremId.THM1,
        k=int(k),
        condition_holds=distinct,
        has_abs_tie_at_k=_abs_tie_at_k(evd.eigenvalues, k, tolerance),
        evd_reconstruction_error=frobenius_distance(evd_rec, m),
        svd_reconstruction_error=frobenius_distance(svd_rec, m),
        sc_reconstruction_error=None,
        best_error=best_rank_k_error(svd_res, k),
        gap=gap,
        verdict=Verdict.EQUAL if gap <= tolerance else Verdict.NOT_EQUAL,
        tolerance=float(tolerance),
        matrix=matrix_name,
    )


def verify_theorem1(
    matrix, k: int, tolerance: float = DEFAULT_TOLERANCE, matrix_name: str = "input"
) -> TheoremReport:
    """Compare ``U_k S_k V_k^T`` with ``X_k Lambda_k X_k^T`` (|lambda|-descending)."""
    return theorem1_sweep(matrix, tolerance, ks=[k], matrix_name=matrix_name)[0]


def theorem1_sweep(matrix, tolerance=DEFAULT_TOLERANCE, ks=None, matrix_name="input"):
    m = as_matrix(matrix)
    n = m.shape[0]
    ks = list(range(1, n + 1)) if ks is None else list(ks)
    for k in ks:
        _check_k(k, n)
    evd = real_spectrum_evd(m, SortConvention.ABS_DESC)
    svd_res = svd(m)
    return [_theorem1_report(m, evd, svd_res, k, tolerance, matrix_name) for k in ks]


def nonnormality_gap(graph: g.ValidatedGraph, k: int) -> float:
    """Frobenius distance between the rank-k SVD and rank-k EVD of ``A_rw``."""
    _check_k(k, graph.num_nodes)
    a_rw = g.random_walk_matrix(graph)
    evd = evd_random_walk(graph, SortConvention.ABS_DESC, target="A_rw")
    return frobenius_distance(
        rank_k_reconstruction(svd(a_rw), k), rank_k_reconstruction(evd, k)
    )


# ---------------------------------------------------------------------------
# Theorem 2

@dataclass(frozen=True)
class _Theorem2Context:
    target: np.ndarray
    by_magnitude: SpectralDecomposition
    by_value: SpectralDecomposition
    svd: SvdResult
    zero_threshold: float


def _theorem2_context(graph: g.ValidatedGraph, zero_tol: float) -> _Theorem2Context:
    a_sym = g.symmetric_normalized_adjacency(graph)
    return _Theorem2Context(
        target=a_sym,
        by_magnitude=symmetric_evd(a_sym, SortConvention.ABS_DESC),
        by_value=symmetric_evd(a_sym, SortConvention.VALUE_DESC),
        svd=svd(a_sym),
        zero_threshold=zero_tol * frobenius_norm(a_sym),
    )


def _theorem2_report(ctx: _Theorem2Context, k: int, tolerance: float) -> TheoremReport:
    top = ctx.by_magnitude.eigenvalues[:k]
    sc_rec = rank_k_reconstruction(ctx.by_value, k)
    sc_error = frobenius_distance(sc_rec, ctx.target)
    best = best_rank_k_error(ctx.svd, k)
    gap = abs(sc_error - best)
    return TheoremReport(
        theorem_id=TheoremId.THM2,
        k=int(k),
        condition_holds=bool(np.all(top > ctx.zero_threshold)),
        has_abs_tie_at_k=_abs_tie_at_k(ctx.by_magnitude.eigenvalues, k, tolerance),
        evd_reconstruction_error=frobenius_distance(
            rank_k_reconstruction(ctx.by_magnitude, k), ctx.target
        ),
        svd_reconstruction_error=frobenius_distance(
            rank_k_reconstruction(ctx.svd, k), ctx.target
        ),
        sc_reconstruction_error=sc_error,
        best_error=best,
        gap=gap,
        verdict=Verdict.EQUAL if gap <= tolerance else Verdict.NOT_EQUAL,
        tolerance=float(tolerance),
        matrix="A_sym",
    )


def verify_theorem2(
    graph: g.ValidatedGraph,
    k: int,
    tolerance: float = DEFAULT_TOLERANCE,
    zero_tol: float = ZERO_TOL,
) -> TheoremReport:
    """Is the spectral-clustering reconstruction an optimal rank-k approximation?

    The check runs on ``A_sym``, which shares A_rw's eigenvalues and whose
    eigenvectors are orthonormal. The spectral-clustering reconstruction keeps
    the k numerically largest eigenpairs (the k smallest of ``L_rw``); the
    optimum comes from the SVD.
    """
    _check_k(k, graph.num_nodes)
    return _theorem2_report(_theorem2_context(graph, zero_tol), k, tolerance)


def theorem2_sweep(
    graph: g.ValidatedGraph,
    tolerance: float = DEFAULT_TOLERANCE,
    zero_tol: float = ZERO_TOL,
    ks=None,
) -> list[TheoremReport]:
    n = graph.num_nodes
    ks = list(range(1, n + 1)) if ks is None else list(ks)
    for k in ks:
        _check_k(k, n)
    ctx = _theorem2_context(graph, zero_tol)
    return [_theorem2_report(ctx, k, tolerance) for k in ks]


# ---------------------------------------------------------------------------
# spectra, correspondence, smoothness

def eigen_sign_stats(graph: g.ValidatedGraph, zero_tol: float = ZERO_TOL) -> SpectrumStats:
    """Sign counts of the A_rw spectrum; ``|lambda| <= zero_tol * ||A_sym||_F`` is zero."""
    a_sym = g.symmetric_normalized_adjacency(graph)
    values = symmetric_evd(a_sym, SortConvention.VALUE_DESC).eigenvalues
    threshold = zero_tol * frobenius_norm(a_sym)
    pos = int(np.sum(values > threshold))
    neg = int(np.sum(values < -threshold))
    n = len(values)
    return SpectrumStats(n, pos, neg, n - pos - neg, threshold, pos / n)


def correspondence_check(graph: g.ValidatedGraph) -> float:
    """``max_i |lambda_i(A_rw) - (1 - mu_i(L_rw))|`` with A_rw descending and
    L_rw ascending, each spectrum computed on its own."""
    a_rw = evd_random_walk(graph, SortConvention.VALUE_DESC, target="A_rw").eigenvalues
    l_rw = evd_random_walk(graph, SortConvention.VALUE_ASC, target="L_rw").eigenvalues
    return float(np.max(np.abs(a_rw - (1.0 - l_rw))))


def smoothness(graph: g.ValidatedGraph, signal, normalized: bool = True) -> float:
    """Rayleigh quotient ``x^T L x / x^T D x`` (``x^T L x / x^T x`` if not normalized).

    The numerator is evaluated as the edge sum ``sum_{i<j} w_ij (x_i - x_j)^2``
    so it is non-negative by construction.
    """
    x = np.asarray(signal, dtype=float)
    if x.shape != (graph.num_nodes,):
        raise ValueError(f"signal must have length {graph.num_nodes}")
    if not np.any(x):
        raise ZeroSignal("signal is identically zero")
    x = x / np.max(np.abs(x))  # scale-free quotient; avoids underflow
    diff = x[:, None] - x[None, :]
    numerator = 0.5 * float(np.sum(graph.adjacency * diff * diff))
    denominator = float(x @ (graph.degrees * x)) if normalized else float(x @ x)
    return numerator / denominator


def smoothness_report(
    graph: g.ValidatedGraph, k: int, source: BasisSource | str = BasisSource.SC_BASES
) -> SmoothnessReport:
    """Smoothness of the spectral-clustering bases or of the bases an SVD of
    A_rw would keep (top-k eigenvalues by magnitude)."""
    _check_k(k, graph.num_nodes)
    source = BasisSource(source)
    if source is BasisSource.SC_BASES:
        emb = spectral_embedding(graph, k)
        vectors, lrw = emb.matrix, emb.eigenvalues
    else:
        evd = evd_random_walk(graph, SortConvention.ABS_DESC, target="A_rw")
        vectors, lrw = evd.eigenvectors[:, :k], 1.0 - evd.eigenvalues[:k]
    values = tuple(float(v) for v in lrw)
    return SmoothnessReport(
        basis_source=source,
        eigenvalues=values,
        a_rw_eigenvalues=tuple(1.0 - v for v in values),
        smoothness=tuple(smoothness(graph, vectors[:, i]) for i in range(k)),
    )
