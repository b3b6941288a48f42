"""Exception hierarchy shared by every module."""


class SpectralError(Exception):
    """Base class for all errors raised by this package."""


# graph construction / validation

class GraphError(SpectralError, ValueError):
    pass


class InvalidGraph(GraphError):
    """Adjacency is not square, not finite, or has negative entries."""


class Asymmetric(GraphError):
    def __init__(self, i: int, j: int, a_ij: float, a_ji: float):
        self.i, self.j = i, j
        super().__init__(f"adjacency not symmetric at ({i}, {j}): {a_ij!r} != {a_ji!r}")


class SelfLoop(GraphError):
    def __init__(self, node: int, line: int | None = None):
        self.node = node
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"self-loop on node {node}{where}")


class IsolatedNode(GraphError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node} has zero degree; D^-1 is undefined")


class Disconnected(GraphError):
    def __init__(self, first: int, second: int, num_components: int):
        self.representatives = (first, second)
        self.num_components = num_components
        super().__init__(
            f"graph has {num_components} components; nodes {first} and {second} "
            "are not connected"
        )


class InvalidParams(GraphError):
    pass


class ConnectivityFailure(GraphError):
    pass


# linear algebra

class NotSymmetric(SpectralError, ValueError):
    pass


class ConvergenceFailure(SpectralError, RuntimeError):
    pass


class KOutOfRange(SpectralError, ValueError):
    def __init__(self, k: int, low: int, high: int):
        self.k = k
        super().__init__(f"k={k} outside [{low}, {high}]")


class ShapeMismatch(SpectralError, ValueError):
    pass


# clustering

class EmptyCluster(SpectralError, ValueError):
    pass


class LabelOutOfRange(SpectralError, ValueError):
    pass


# analysis

class ComplexSpectrumSuspected(SpectralError, ValueError):
    pass


class ZeroSignal(SpectralError, ValueError):
    pass


# io

class ParseError(SpectralError, ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UnsupportedPayloadForCsv(SpectralError, ValueError):
    pass
