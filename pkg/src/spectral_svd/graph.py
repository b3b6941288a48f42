"""Undirected weighted graphs and the matrices derived from them.

All matrices are dense ``numpy`` arrays. ``validate`` is the only way to
obtain a :class:`ValidatedGraph`; every derived-matrix function assumes one.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    Asymmetric,
    ConnectivityFailure,
    Disconnected,
    InvalidGraph,
    InvalidParams,
    IsolatedNode,
    SelfLoop,
)

FAMILIES = (
    "path", "cycle", "complete", "star", "barbell", "erdos_renyi", "planted_partition",
)
# aliases accepted by generator specs on the command line
FAMILY_ALIASES = {"er": "erdos_renyi", "sbm": "planted_partition", "planted": "planted_partition"}

MAX_CONNECT_RETRIES = 100


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph stored as a dense adjacency matrix."""

    adjacency: np.ndarray
    node_labels: tuple | None = None

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=float)
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        if self.node_labels is not None:
            labels = tuple(self.node_labels)
            if adj.ndim == 2 and len(labels) != adj.shape[0]:
                raise InvalidGraph(f"{len(labels)} labels for {adj.shape[0]} nodes")
            object.__setattr__(self, "node_labels", labels)

    @property
    def num_nodes(self) -> int:
        return self.adjacency.shape[0]

    @classmethod
    def from_edges(cls, num_nodes: int, edges, node_labels=None) -> "Graph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; duplicate edges add up."""
        adj = np.zeros((num_nodes, num_nodes))
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            w = float(edge[2]) if len(edge) > 2 else 1.0
            adj[u, v] += w
            if u != v:
                adj[v, u] += w
        return cls(adj, node_labels)


@dataclass(frozen=True, eq=False)
class ValidatedGraph(Graph):
    """A graph known to be symmetric, loop-free, connected, with positive degrees."""

    degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        super().__post_init__()
        deg = self.adjacency.sum(axis=1)
        deg.setflags(write=False)
        object.__setattr__(self, "degrees", deg)

    def edges(self) -> list[tuple[int, int, float]]:
        """Upper-triangle edge list ``(i, j, w)`` with ``i < j``, row-major."""
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return [(int(a), int(b), float(self.adjacency[a, b])) for a, b in zip(i, j)]

    @property
    def num_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, 1)))


def _components(adj: np.ndarray) -> list[int]:
    """Component id per node, via breadth-first search over nonzero entries."""
    n = adj.shape[0]
    comp = [-1] * n
    neighbours = [np.flatnonzero(adj[i]) for i in range(n)]
    current = 0
    for start in range(n):
        if comp[start] != -1:
            continue
        comp[start] = current
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for nb in neighbours[node]:
                if comp[nb] == -1:
                    comp[nb] = current
                    queue.append(nb)
        current += 1
    return comp


def validate(graph: Graph | np.ndarray, drop_self_loops: bool = False) -> ValidatedGraph:
    """Check every structural assumption and return an immutable ValidatedGraph.

    Raises Asymmetric, SelfLoop, IsolatedNode or Disconnected (in that order
    of checking). With ``drop_self_loops`` the diagonal is zeroed instead of
    rejected.
    """
    if not isinstance(graph, Graph):
        graph = Graph(graph)
    adj = np.array(graph.adjacency, dtype=float)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] == 0:
        raise InvalidGraph(f"adjacency must be a non-empty square matrix, got {adj.shape}")
    if not np.all(np.isfinite(adj)):
        raise InvalidGraph("adjacency has non-finite entries")
    if np.any(adj < 0):
        raise InvalidGraph("adjacency has negative weights")

    mismatch = np.argwhere(adj != adj.T)
    if len(mismatch):
        i, j = (int(x) for x in mismatch[0])
        raise Asymmetric(i, j, float(adj[i, j]), float(adj[j, i]))

    loops = np.flatnonzero(np.diagonal(adj))
    if len(loops):
        if not drop_self_loops:
            raise SelfLoop(int(loops[0]))
        np.fill_diagonal(adj, 0.0)

    isolated = np.flatnonzero(adj.sum(axis=1) <= 0)
    if len(isolated):
        raise IsolatedNode(int(isolated[0]))

    comp = _components(adj)
    num_components = max(comp) + 1
    if num_components > 1:
        other = comp.index(1)
        raise Disconnected(0, other, num_components)
    return ValidatedGraph(adj, graph.node_labels)


# ---------------------------------------------------------------------------
# derived matrices

def degree_matrix(graph: ValidatedGraph) -> np.ndarray:
    return np.diag(graph.degrees)


def laplacian(graph: ValidatedGraph) -> np.ndarray:
    """``L = D - A``."""
    return np.diag(graph.degrees) - graph.adjacency


def random_walk_laplacian(graph: ValidatedGraph) -> np.ndarray:
    """``L_rw = I - D^-1 A``."""
    return np.eye(graph.num_nodes) - random_walk_matrix(graph)


def random_walk_matrix(graph: ValidatedGraph) -> np.ndarray:
    """Row-stochastic transition matrix ``A_rw = D^-1 A``."""
    return graph.adjacency / graph.degrees[:, None]


def symmetric_normalized_adjacency(graph: ValidatedGraph) -> np.ndarray:
    """``A_sym = D^-1/2 A D^-1/2``, symmetric and similar to ``A_rw``.

    An eigenvector ``u`` of A_sym maps to the A_rw eigenvector ``D^-1/2 u``.
    """
    inv_sqrt = 1.0 / np.sqrt(graph.degrees)
    a_sym = graph.adjacency * inv_sqrt[:, None] * inv_sqrt[None, :]
    # exact symmetry regardless of rounding order
    return 0.5 * (a_sym + a_sym.T)


def symmetric_normalized_laplacian(graph: ValidatedGraph) -> np.ndarray:
    """``I - A_sym``, the symmetric form similar to ``L_rw``."""
    return np.eye(graph.num_nodes) - symmetric_normalized_adjacency(graph)


def is_bipartite(graph: ValidatedGraph) -> bool:
    n = graph.num_nodes
    colour = [-1] * n
    colour[0] = 0
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for nb in np.flatnonzero(graph.adjacency[node]):
            if colour[nb] == -1:
                colour[nb] = 1 - colour[node]
                queue.append(nb)
            elif colour[nb] == colour[node]:
                return False
    return True


# ---------------------------------------------------------------------------
# generators

def _need(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidParams(message)


def _as_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise InvalidParams(f"{name} must be an integer")
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, (int, np.integer)):
        raise InvalidParams(f"{name} must be an integer, got {value!r}")
    return int(value)


def _as_prob(value, name: str) -> float:
    p = float(value)
    _need(0.0 < p <= 1.0, f"{name} must lie in (0, 1], got {value!r}")
    return p


def block_sizes(n: int, k_blocks: int) -> list[int]:
    """Near-equal contiguous block sizes, larger blocks first."""
    base, extra = divmod(n, k_blocks)
    return [base + (1 if b < extra else 0) for b in range(k_blocks)]


def planted_labels(n: int, k_blocks: int) -> np.ndarray:
    """Ground-truth block membership used by ``planted_partition``."""
    return np.repeat(np.arange(k_blocks), block_sizes(n, k_blocks))


def _sample_connected(n: int, prob: np.ndarray, seed: int) -> ValidatedGraph:
    rng = np.random.Generator(np.random.PCG64(seed))
    upper = np.triu_indices(n, 1)
    for _ in range(MAX_CONNECT_RETRIES):
        draws = rng.random(len(upper[0]))
        adj = np.zeros((n, n))
        adj[upper] = (draws < prob[upper]).astype(float)
        adj = adj + adj.T
        if np.all(adj.sum(axis=1) > 0) and max(_components(adj)) == 0:
            return ValidatedGraph(adj)
    raise ConnectivityFailure(
        f"no connected sample after {MAX_CONNECT_RETRIES} draws (n={n}, seed={seed})"
    )


def generate(family: str, params: Sequence, seed: int = 0) -> ValidatedGraph:
    """Deterministic graph generator.

    Families: ``path(n)``, ``cycle(n)``, ``complete(n)``, ``star(n)`` (node 0
    is the centre, n nodes total), ``barbell(m1, m2)`` (two cliques joined by
    the edge ``m1-1 -- m1``), ``erdos_renyi(n, p)`` and
    ``planted_partition(n, k_blocks, p_in, p_out)``.

    Random families draw from one PCG64 stream seeded with ``seed`` per call
    and resample until the graph is connected, at most
    ``MAX_CONNECT_RETRIES`` times.
    """
    family = FAMILY_ALIASES.get(family, family)
    _need(family in FAMILIES, f"unknown graph family {family!r}")
    params = list(params)
    arity = {"barbell": 2, "erdos_renyi": 2, "planted_partition": 4}.get(family, 1)
    _need(len(params) == arity, f"{family} takes {arity} parameter(s), got {len(params)}")

    if family == "barbell":
        m1, m2 = _as_int(params[0], "m1"), _as_int(params[1], "m2")
        _need(m1 >= 1 and m2 >= 1, "barbell clique sizes must be >= 1")
        n = m1 + m2
        adj = np.zeros((n, n))
        adj[:m1, :m1] = 1.0
        adj[m1:, m1:] = 1.0
        np.fill_diagonal(adj, 0.0)
        adj[m1 - 1, m1] = adj[m1, m1 - 1] = 1.0
        return validate(Graph(adj))

    n = _as_int(params[0], "n")
    _need(n >= 2, f"n must be >= 2, got {n}")
    if family == "path":
        return validate(Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)]))
    if family == "cycle":
        _need(n >= 3, "cycle needs n >= 3")
        return validate(Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)]))
    if family == "complete":
        return validate(Graph(np.ones((n, n)) - np.eye(n)))
    if family == "star":
        return validate(Graph.from_edges(n, [(0, i) for i in range(1, n)]))

    if family == "erdos_renyi":
        p = _as_prob(params[1], "p")
        return _sample_connected(n, np.full((n, n), p), _as_int(seed, "seed"))

    k_blocks = _as_int(params[1], "k_blocks")
    _need(1 <= k_blocks <= n, f"k_blocks must lie in [1, {n}]")
    p_in, p_out = _as_prob(params[2], "p_in"), _as_prob(params[3], "p_out")
    labels = planted_labels(n, k_blocks)
    prob = np.where(labels[:, None] == labels[None, :], p_in, p_out)
    return _sample_connected(n, prob, _as_int(seed, "seed"))
