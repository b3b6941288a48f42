"""Spectral clustering, EVD and SVD of graph matrices, from first principles."""

__version__ = "0.1.0"

from .graph import Graph, ValidatedGraph, generate, validate  # noqa: E402
from .linalg import SortConvention, svd, symmetric_evd  # noqa: E402

__all__ = [
    "Graph",
    "ValidatedGraph",
    "SortConvention",
    "generate",
    "svd",
    "symmetric_evd",
    "validate",
]
