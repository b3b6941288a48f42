import numpy as np

from spectral_svd import graph as g

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def fixture_graphs(max_n: int = 12):
    """Deterministic family fixtures: path, cycle, complete, star, barbell."""
    out = []
    for n in range(2, max_n + 1):
        out.append((f"path({n})", g.generate("path", [n])))
        out.append((f"complete({n})", g.generate("complete", [n])))
        out.append((f"star({n})", g.generate("star", [n])))
        if n >= 3:
            out.append((f"cycle({n})", g.generate("cycle", [n])))
        if n % 2 == 0:
            out.append((f"barbell({n // 2},{n // 2})", g.generate("barbell", [n // 2, n // 2])))
    return out


def random_graphs(count: int, max_n: int, seed0: int = 100):
    """Alternating Erdos-Renyi / planted-partition graphs with sizes spread up to max_n."""
    out = []
    for i in range(count):
        n = 10 + (max_n - 10) * i // max(count - 1, 1)
        seed = seed0 + i
        p = min(1.0, max(0.1, 2.5 * np.log(n) / n))
        if i % 2 == 0:
            out.append((f"er({n},{p:.3f};{seed})", g.generate("erdos_renyi", [n, p], seed)))
        else:
            blocks = 2 + i % 3
            out.append(
                (f"sbm({n},{blocks};{seed})",
                 g.generate("planted_partition", [n, blocks, min(1.0, 3 * p), p / 2], seed))
            )
    return out
