"""Edge-list / adjacency parsing and canonical JSON / CSV report output."""
from __future__ import annotations

import csv
import enum
import io as _io
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, SelfLoop, UnsupportedPayloadForCsv
from .graph import Graph, ValidatedGraph, validate

SCHEMA_VERSION = "1.0"

_INT_RE = re.compile(r"[+-]?\d+")


class ReportFormat(str, enum.Enum):
    JSON = "json"
    CSV = "csv"


# ---------------------------------------------------------------------------
# edge lists

@dataclass
class EdgeListDocument:
    """Parsed edge list with node ids compacted to ``0..N-1``.

    ``labels[i]`` is the original id of compacted node ``i``; ``edges`` holds
    one ``(u, v, w)`` per unordered pair with ``u < v`` and duplicates summed.
    """

    num_nodes: int
    edges: list[tuple[int, int, float]]
    labels: list[int]
    comment_count: int = 0
    dropped_self_loops: int = 0

    def to_graph(self) -> ValidatedGraph:
        return validate(Graph.from_edges(self.num_nodes, self.edges, self.labels))


def _parse_node(token: str, lineno: int) -> int:
    if not _INT_RE.fullmatch(token):
        raise ParseError(lineno, f"node id {token!r} is not an integer")
    value = int(token)
    if value < 0:
        raise ParseError(lineno, f"node id {value} is negative")
    return value


def _parse_weight(token: str, lineno: int) -> float:
    try:
        w = float(token)
    except ValueError:
        raise ParseError(lineno, f"weight {token!r} is not a number") from None
    if not math.isfinite(w):
        raise ParseError(lineno, f"weight {token!r} is not finite")
    if w < 0:
        raise ParseError(lineno, f"negative weight {w!r}")
    if w == 0:
        raise ParseError(lineno, "zero weight")
    return w


def parse_edge_list(
    text: str | bytes, drop_self_loops: bool = False, sort_ids: bool = False
) -> EdgeListDocument:
    """Parse ``u v [w]`` lines; ``#`` / ``%`` start comments, blank lines skip.

    Node ids are compacted in first-appearance order, or in ascending id
    order with ``sort_ids``. A line ``u u`` raises SelfLoop unless
    ``drop_self_loops`` is set.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(0, f"input is not UTF-8: {exc}") from None
    order: dict[int, None] = {}
    weights: dict[tuple[int, int], float] = {}
    comments = dropped = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped[0] in "#%":
            comments += 1
            continue
        tokens = stripped.split()
        if len(tokens) not in (2, 3):
            raise ParseError(lineno, f"expected 'u v [w]', got {len(tokens)} fields")
        u, v = _parse_node(tokens[0], lineno), _parse_node(tokens[1], lineno)
        w = _parse_weight(tokens[2], lineno) if len(tokens) == 3 else 1.0
        order.setdefault(u)
        order.setdefault(v)
        if u == v:
            if not drop_self_loops:
                raise SelfLoop(u, line=lineno)
            dropped += 1
            continue
        key = (min(u, v), max(u, v))
        weights[key] = weights.get(key, 0.0) + w

    labels = sorted(order) if sort_ids else list(order)
    index = {label: i for i, label in enumerate(labels)}
    edges = []
    for (a, b), w in weights.items():
        i, j = index[a], index[b]
        edges.append((min(i, j), max(i, j), w))
    edges.sort()
    return EdgeListDocument(len(labels), edges, labels, comments, dropped)


def write_edge_list(graph: Graph, use_labels: bool = True) -> str:
    """One ``u v w`` line per edge (``u < v``), weights in round-trip precision.

    Reading it back with ``parse_edge_list(text, sort_ids=True)`` recovers the
    adjacency exactly whenever the ids written are ascending in node index.
    """
    adj = np.asarray(graph.adjacency)
    labels = graph.node_labels if (use_labels and graph.node_labels is not None) else None
    lines = []
    for i, j in zip(*np.nonzero(np.triu(adj, 1))):
        u = labels[i] if labels else int(i)
        v = labels[j] if labels else int(j)
        lines.append(f"{u} {v} {format_float(float(adj[i, j]))}\n")
    return "".join(lines)


def parse_adjacency_matrix(text: str | bytes) -> Graph:
    """Whitespace-separated dense grid, one row per line; comments as above."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#%":
            continue
        try:
            row = [float(tok) for tok in stripped.split()]
        except ValueError:
            raise ParseError(lineno, "non-numeric entry") from None
        if rows and len(row) != len(rows[0]):
            raise ParseError(lineno, f"expected {len(rows[0])} entries, got {len(row)}")
        rows.append(row)
    if not rows or len(rows) != len(rows[0]):
        raise ParseError(len(rows), "adjacency matrix must be square and non-empty")
    return Graph(np.array(rows))


# ---------------------------------------------------------------------------
# reports

def format_float(x: float) -> str:
    """17 significant digits; always carries a '.' or exponent so it reads back as float."""
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    if x == 0.0:
        x = 0.0  # fold -0.0
    s = format(x, ".17g")
    if "." not in s and "e" not in s:
        s += ".0"
    return s


@dataclass
class ReportDocument:
    """A serializable report: ``kind`` names the payload schema."""

    kind: str
    payload: dict
    provenance: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "payload": self.payload,
            "provenance": self.provenance,
        }


def _plain(obj):
    """Convert numpy scalars/arrays, enums and tuples to JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _json(value, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(k)}: {_json(value[k], indent + 1)}" for k in sorted(value)
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in value):
            return "[" + ", ".join(_json(v, 0) for v in value) + "]"
        return "[\n" + ",\n".join(inner + _json(v, indent + 1) for v in value) + "\n" + pad + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return json.dumps(value, ensure_ascii=False)


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _csv_rows(doc: ReportDocument) -> tuple[list[str], list[list]]:
    p = doc.payload
    if doc.kind == "spectrum":
        header = ["index", "eigenvalue"]
        has_sv = p.get("singular_values") is not None
        if has_sv:
            header.append("singular_value")
        rows = []
        for i, lam in enumerate(p["eigenvalues"]):
            row = [i, lam]
            if has_sv:
                row.append(p["singular_values"][i])
            rows.append(row)
        return header, rows
    if doc.kind == "cluster_assignment":
        return ["node", "label"], [[i, lab] for i, lab in enumerate(p["labels"])]
    if doc.kind in ("theorem_report", "spectrum_stats"):
        header = sorted(p)
        return header, [[p[h] for h in header]]
    if doc.kind == "theorem_sweep":
        reports = p["reports"]
        header = sorted(reports[0]) if reports else []
        return header, [[r[h] for h in header] for r in reports]
    if doc.kind == "smoothness":
        header = ["basis_source", "index", "eigenvalue", "a_rw_eigenvalue", "smoothness"]
        rows = []
        for rep in p["reports"]:
            for i, (lam, mu, s) in enumerate(
                zip(rep["eigenvalues"], rep["a_rw_eigenvalues"], rep["smoothness"])
            ):
                rows.append([rep["basis_source"], i, lam, mu, s])
        return header, rows
    raise UnsupportedPayloadForCsv(f"report kind {doc.kind!r} is JSON-only")


def write_report(doc: ReportDocument, fmt: ReportFormat | str = ReportFormat.JSON) -> bytes:
    """Serialize deterministically: sorted keys, 17-digit floats, trailing newline."""
    fmt = ReportFormat(fmt)
    if fmt is ReportFormat.JSON:
        return (_json(_plain(doc.to_dict()), 0) + "\n").encode("utf-8")
    header, rows = _csv_rows(ReportDocument(doc.kind, _plain(doc.payload), doc.provenance))
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue().encode("utf-8")


def parse_report(data: str | bytes) -> ReportDocument:
    """Inverse of ``write_report(..., JSON)``."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    obj = json.loads(data)
    return ReportDocument(
        kind=obj["kind"],
        payload=obj["payload"],
        provenance=obj.get("provenance", {}),
        schema_version=obj["schema_version"],
    )
