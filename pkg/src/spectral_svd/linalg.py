"""Dense symmetric eigensolver, SVD and rank-k reconstructions.

Matrices are plain ``numpy.ndarray`` objects of dtype float64. The
eigensolver is Householder tridiagonalization followed by implicit-shift
QL iteration; the SVD is read off the eigendecomposition of the symmetric
Jordan-Wielandt embedding ``[[0, M], [M^T, 0]]``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, KOutOfRange, NotSymmetric, ShapeMismatch

SYMMETRY_TOL = 1e-12
RESIDUAL_TOL = 1e-10
ORTHO_TOL = 1e-10
SVD_RECON_TOL = 1e-9
ZERO_TOL = 1e-10

_EPS = np.finfo(float).eps
_MAX_QL_ITERATIONS = 60


class SortConvention(str, enum.Enum):
    ABS_DESC = "ABS_DESC"
    VALUE_ASC = "VALUE_ASC"
    VALUE_DESC = "VALUE_DESC"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs; column ``i`` of ``eigenvectors`` belongs to ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sort_convention: SortConvention
    source_symmetric: bool = True

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class SvdResult:
    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    @property
    def n(self) -> int:
        return len(self.S)


def as_matrix(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=float)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _require_square(m: np.ndarray) -> int:
    if m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ShapeMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    return m.shape[0]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# symmetric eigensolver

def _tridiagonalize(a: np.ndarray):
    """Reduce symmetric ``a`` to tridiagonal form ``Q^T a Q``.

    Returns the diagonal, the sub-diagonal (length n-1) and ``Q^T``.
    """
    a = a.copy()
    n = a.shape[0]
    reflectors = []
    for k in range(n - 2):
        x = a[k + 1:, k]
        if not np.any(x[1:]):
            reflectors.append(None)
            continue
        # build the reflector from a unit-scaled copy so tiny columns do not underflow
        xs = float(np.max(np.abs(x)))
        v = x / xs
        norm_v = math.sqrt(float(v @ v))
        alpha = -norm_v * xs if v[0] >= 0 else norm_v * xs
        v[0] += norm_v if v[0] >= 0 else -norm_v
        v /= math.sqrt(float(v @ v))
        s = a[k + 1:, k + 1:]
        p = s @ v
        w = 2.0 * (p - (v @ p) * v)
        s -= np.outer(v, w)
        s -= np.outer(w, v)
        a[k + 1, k] = a[k, k + 1] = alpha
        a[k + 2:, k] = 0.0
        a[k, k + 2:] = 0.0
        reflectors.append(v)

    # Q = H_0 H_1 ... H_{n-3}, accumulated backwards; store Q^T so that the
    # QL rotations act on contiguous rows.
    q = np.eye(n)
    for k in range(n - 3, -1, -1):
        v = reflectors[k]
        if v is None:
            continue
        block = q[k + 1:, k + 1:]
        block -= 2.0 * np.outer(v, v @ block)
    diag = np.diagonal(a).copy()
    off = np.diagonal(a, 1).copy()
    return diag, off, q.T.copy()


def _tridiagonal_ql(d: np.ndarray, e: np.ndarray, w: np.ndarray) -> None:
    """Implicit-shift QL on a symmetric tridiagonal matrix, in place.

    ``d`` (diagonal) ends up holding the eigenvalues, and row ``i`` of ``w``
    the matching eigenvector (rotations are applied to rows of ``w``).
    """
    n = len(d)
    d_ = [float(x) for x in d]
    # e_[i] couples i and i+1; the trailing slot is scratch
    e_ = [float(x) for x in e] + [0.0]
    # absolute floor: couplings this small relative to ||T|| cannot move any
    # eigenvalue measurably, and their squares would underflow in the shift
    floor = _EPS * _EPS * max(max(map(abs, d_), default=0.0), max(map(abs, e_)))
    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d_[m]) + abs(d_[m + 1])
                if abs(e_[m]) <= _EPS * dd or abs(e_[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > _MAX_QL_ITERATIONS:
                raise ConvergenceFailure(
                    f"QL iteration did not converge for eigenvalue {l} "
                    f"within {_MAX_QL_ITERATIONS} sweeps"
                )
            g = (d_[l + 1] - d_[l]) / (2.0 * e_[l])
            r = math.hypot(g, 1.0)
            g = d_[m] - d_[l] + e_[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e_[i]
                b = c * e_[i]
                r = math.hypot(f, g)
                e_[i + 1] = r
                if r == 0.0:
                    d_[i + 1] -= p
                    e_[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d_[i + 1] - p
                r = (d_[i] - g) * s + 2.0 * c * b
                p = s * r
                d_[i + 1] = g + p
                g = c * r - b
                rows = w[i:i + 2]
                rows[:] = np.array([[c, -s], [s, c]]) @ rows
                i -= 1
            if underflow:
                continue
            d_[l] -= p
            e_[l] = g
            e_[m] = 0.0
    d[:] = d_


def _normalize_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is non-negative.

    Ties go to the lowest index (``argmax`` semantics).
    """
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    signs = np.where(pivots < 0, -1.0, 1.0)
    return vectors * signs


def sort_order(values: np.ndarray, convention: SortConvention, tie_tol: float = 0.0) -> np.ndarray:
    """Permutation that sorts ``values`` under ``convention``.

    ``values`` is assumed ascending (solver output order), so "original
    index" is the ascending-value rank. For ABS_DESC, magnitudes within
    ``tie_tol`` of each other form a tie group ordered positive first, then
    by ascending original index.
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    convention = SortConvention(convention)
    if convention is SortConvention.VALUE_ASC:
        return np.argsort(values, kind="stable")
    if convention is SortConvention.VALUE_DESC:
        return np.argsort(-values, kind="stable")
    mags = np.abs(values)
    order = list(np.argsort(-mags, kind="stable"))
    out = []
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and mags[order[start]] - mags[order[stop]] <= tie_tol:
            stop += 1
        group = order[start:stop]
        group.sort(key=lambda i: (values[i] < 0, i))
        out.extend(group)
        start = stop
    return np.array(out, dtype=int)


def _tie_tolerance(values: np.ndarray, scale: float) -> float:
    return 64.0 * _EPS * max(scale, float(np.max(np.abs(values))) if len(values) else 0.0)


def symmetric_evd(
    matrix,
    convention: SortConvention | str = SortConvention.ABS_DESC,
    check: bool = True,
) -> SpectralDecomposition:
    """Full eigendecomposition of a real symmetric matrix.

    Eigenvectors are orthonormal and sign-normalized (largest-magnitude
    entry non-negative). With ``check`` the residual and orthonormality
    bounds are verified and ``ConvergenceFailure`` is raised on violation.
    """
    m = as_matrix(matrix)
    n = _require_square(m)
    dev = float(np.max(np.abs(m - m.T)))
    if dev > SYMMETRY_TOL:
        raise NotSymmetric(f"max |M - M^T| = {dev:.3e} exceeds {SYMMETRY_TOL}")
    m = 0.5 * (m + m.T)

    if n == 1:
        values = m[0].copy()
        vectors = np.ones((1, 1))
    else:
        # unit scaling keeps Householder norms clear of under/overflow
        scale = float(np.max(np.abs(m))) or 1.0
        d, e, w = _tridiagonalize(m / scale)
        _tridiagonal_ql(d, e, w)
        asc = np.argsort(d, kind="stable")
        values = d[asc] * scale
        vectors = w[asc].T

    fro = frobenius_norm(m)
    order = sort_order(values, convention, _tie_tolerance(values, 0.0))
    values = values[order].copy()
    vectors = _normalize_signs(np.ascontiguousarray(vectors[:, order]))

    if check:
        _check_eigenpairs(m, values, vectors, fro)
        ortho = float(np.max(np.abs(vectors.T @ vectors - np.eye(n))))
        if ortho > ORTHO_TOL:
            raise ConvergenceFailure(f"eigenvectors not orthonormal: {ortho:.3e}")
    return SpectralDecomposition(
        _freeze(values), _freeze(vectors), SortConvention(convention), True
    )


def _check_eigenpairs(m, values, vectors, fro, bound=RESIDUAL_TOL):
    res = residuals(m, values, vectors)
    worst = float(np.max(res)) if len(res) else 0.0
    if worst > bound * max(fro, 1e-300) and worst > 0.0:
        raise ConvergenceFailure(
            f"eigenpair residual {worst:.3e} exceeds {bound:g} * ||M||_F"
        )


def residuals(matrix, values, vectors) -> np.ndarray:
    """``||M x_i - lambda_i x_i||_2`` for every column ``x_i``."""
    m = np.asarray(matrix, dtype=float)
    return np.linalg.norm(m @ vectors - vectors * values, axis=0)


# ---------------------------------------------------------------------------
# SVD through the Jordan-Wielandt embedding

def _orthonormalize(cols: np.ndarray) -> np.ndarray:
    """Two passes of modified Gram-Schmidt, column order preserved."""
    q = cols.copy()
    for _ in range(2):
        for j in range(q.shape[1]):
            for i in range(j):
                q[:, j] -= (q[:, i] @ q[:, j]) * q[:, i]
            q[:, j] /= np.linalg.norm(q[:, j])
    return q


def _complete_basis(q: np.ndarray, n: int) -> np.ndarray:
    """Extend orthonormal columns ``q`` (n x r) to an n x n orthonormal basis.

    Each new column comes from the coordinate vector with the largest
    residual after projecting out the current basis (lowest index on ties).
    """
    basis = q
    eye = np.eye(n)
    while basis.shape[1] < n:
        r = eye - basis @ (basis.T @ eye)
        r -= basis @ (basis.T @ r)
        norms = np.linalg.norm(r, axis=0)
        j = int(np.argmax(norms))
        v = r[:, j] / norms[j]
        v -= basis @ (basis.T @ v)
        v /= np.linalg.norm(v)
        basis = np.column_stack([basis, v])
    return basis


def svd(matrix, zero_tol: float = ZERO_TOL, check: bool = True) -> SvdResult:
    """Singular value decomposition ``M = U diag(S) V^T`` of a square matrix.

    ``S`` is descending and non-negative. For a non-zero singular value the
    pair (u, v) is flipped together so that u's largest-magnitude entry is
    non-negative; columns with ``S_i <= zero_tol * ||M||_F`` are arbitrary
    orthonormal completions, sign-normalized independently.
    """
    m = as_matrix(matrix)
    n = _require_square(m)
    fro = frobenius_norm(m)
    embed = np.zeros((2 * n, 2 * n))
    embed[:n, n:] = m
    embed[n:, :n] = m.T
    evd = symmetric_evd(embed, SortConvention.VALUE_DESC, check=check)

    sigma = np.abs(evd.eigenvalues[:n])
    top = evd.eigenvectors[:n, :n]
    bottom = evd.eigenvectors[n:, :n]
    threshold = zero_tol * fro
    keep = [i for i in range(n) if sigma[i] > threshold]

    if keep:
        u = top[:, keep] / np.linalg.norm(top[:, keep], axis=0)
        v = bottom[:, keep] / np.linalg.norm(bottom[:, keep], axis=0)
        u = _orthonormalize(u)
        v = _orthonormalize(v)
        idx = np.argmax(np.abs(u), axis=0)
        flip = np.where(u[idx, np.arange(len(keep))] < 0, -1.0, 1.0)
        u = u * flip
        v = v * flip
    else:
        u = np.zeros((n, 0))
        v = np.zeros((n, 0))
    r = len(keep)
    full_u = _complete_basis(u, n)
    full_v = _complete_basis(v, n)
    full_u[:, r:] = _normalize_signs(full_u[:, r:])
    full_v[:, r:] = _normalize_signs(full_v[:, r:])

    s = np.zeros(n)
    s[:r] = sigma[keep]
    result = SvdResult(_freeze(full_u), _freeze(s), _freeze(full_v))
    if check:
        err = frobenius_norm((full_u * s) @ full_v.T - m)
        if err > SVD_RECON_TOL * fro and err > 0.0:
            raise ConvergenceFailure(f"SVD reconstruction error {err:.3e}")
        for name, q in (("U", full_u), ("V", full_v)):
            ortho = float(np.max(np.abs(q.T @ q - np.eye(n))))
            if ortho > ORTHO_TOL:
                raise ConvergenceFailure(f"{name} not orthonormal: {ortho:.3e}")
    return result


# ---------------------------------------------------------------------------
# reconstructions and errors

def _check_k(k: int, n: int) -> None:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise KOutOfRange(k, 1, n)


def rank_k_reconstruction(decomposition: SpectralDecomposition | SvdResult, k: int) -> np.ndarray:
    """``U_k S_k V_k^T`` for an SVD, ``X_k Lambda_k X_k^T`` for an EVD."""
    _check_k(k, decomposition.n)
    if isinstance(decomposition, SvdResult):
        return (decomposition.U[:, :k] * decomposition.S[:k]) @ decomposition.V[:, :k].T
    x = decomposition.eigenvectors[:, :k]
    return (x * decomposition.eigenvalues[:k]) @ x.T


def frobenius_norm(matrix) -> float:
    """``||M||_F`` computed on a unit-scaled copy so tiny or huge entries do
    not under/overflow when squared."""
    m = np.asarray(matrix, dtype=float)
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    if scale == 0.0:
        return 0.0
    return scale * float(np.sqrt(np.sum((m / scale) ** 2)))


def frobenius_distance(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return frobenius_norm(a - b)


def best_rank_k_error(result: SvdResult, k: int) -> float:
    """Eckart-Young optimum: sqrt of the sum of the discarded ``S_i^2``."""
    _check_k(k, result.n)
    return frobenius_norm(result.S[k:])


# ---------------------------------------------------------------------------
# random-walk targets via the D^1/2 similarity

RANDOM_WALK_TARGETS = ("A_rw", "L_rw")


def evd_random_walk(
    graph,
    convention: SortConvention | str = SortConvention.ABS_DESC,
    target: str = "A_rw",
    check: bool = True,
) -> SpectralDecomposition:
    """Eigenpairs of the non-symmetric ``A_rw`` or ``L_rw`` of a validated graph.

    The symmetric similar form (``A_sym`` or ``I - A_sym``) is decomposed and
    each eigenvector mapped back as ``x = D^-1/2 u``, rescaled to unit norm.
    The residual bound is checked against the non-symmetric target itself.
    """
    from . import graph as g

    if target not in RANDOM_WALK_TARGETS:
        raise ValueError(f"target must be one of {RANDOM_WALK_TARGETS}, got {target!r}")
    if target == "A_rw":
        similar, actual = g.symmetric_normalized_adjacency(graph), g.random_walk_matrix(graph)
    else:
        similar, actual = g.symmetric_normalized_laplacian(graph), g.random_walk_laplacian(graph)
    sym = symmetric_evd(similar, convention, check=check)
    x = sym.eigenvectors / np.sqrt(graph.degrees)[:, None]
    x = _normalize_signs(x / np.linalg.norm(x, axis=0))
    if check:
        _check_eigenpairs(actual, sym.eigenvalues, x, frobenius_norm(actual))
    return SpectralDecomposition(sym.eigenvalues, _freeze(x), sym.sort_convention, False)
