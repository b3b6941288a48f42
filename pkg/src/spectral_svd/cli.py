"""Command-line entry point.

Exit codes: 0 report written, 1 input or validation error, 2 usage error,
3 ``--expect`` verdict mismatch.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from . import analysis as an
from . import graph as g
from .clustering import spectral_cluster
from .errors import SpectralError
from .io import (
    ReportDocument,
    ReportFormat,
    parse_adjacency_matrix,
    parse_edge_list,
    write_report,
)
from .linalg import ZERO_TOL, SortConvention, evd_random_walk, svd, symmetric_evd

EXIT_OK, EXIT_INPUT, EXIT_USAGE, EXIT_EXPECT = 0, 1, 2, 3

SPECTRA_MATRICES = ("all", "L", "L_rw", "A_rw")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    k: int | None = None
    seed: int = 0
    tolerance: float = an.DEFAULT_TOLERANCE
    zero_tol: float = ZERO_TOL
    output: str | None = None
    format: ReportFormat = ReportFormat.JSON
    drop_self_loops: bool = False
    input_format: str = "edgelist"


class UsageError(Exception):
    pass


def _number(token: str):
    try:
        return int(token)
    except ValueError:
        return float(token)


def load_graph(spec: str, seed: int = 0, drop_self_loops: bool = False,
               input_format: str = "edgelist") -> g.ValidatedGraph:
    """Resolve ``gen:<family>:<p1>,<p2>,...`` or a file path to a validated graph."""
    if spec.startswith("gen:"):
        parts = spec.split(":")
        if len(parts) != 3 or not parts[2]:
            raise g.InvalidParams(f"generator spec must look like gen:family:params, got {spec!r}")
        try:
            params = [_number(tok) for tok in parts[2].split(",")]
        except ValueError:
            raise g.InvalidParams(f"bad generator parameters in {spec!r}") from None
        return g.generate(parts[1], params, seed)
    data = Path(spec).read_bytes()
    if input_format == "matrix":
        return g.validate(parse_adjacency_matrix(data), drop_self_loops=drop_self_loops)
    return parse_edge_list(data, drop_self_loops=drop_self_loops).to_graph()


def _provenance(cfg: RunConfig, graph: g.ValidatedGraph, **extra) -> dict:
    prov = {
        "artifact_version": __version__,
        "command": cfg.command,
        "input": cfg.input,
        "num_nodes": graph.num_nodes,
        "seed": cfg.seed,
        "tolerance": cfg.tolerance,
        "zero_tolerance": cfg.zero_tol,
    }
    if cfg.k is not None:
        prov["k"] = cfg.k
    prov.update(extra)
    return prov


def _need_k(cfg: RunConfig) -> int:
    if cfg.k is None:
        raise UsageError(f"{cfg.command} requires --k")
    return cfg.k


def _spectrum_payload(graph: g.ValidatedGraph, name: str) -> dict:
    if name == "L":
        evd = symmetric_evd(g.laplacian(graph), SortConvention.VALUE_ASC)
        return {"matrix": "L", "sort_convention": evd.sort_convention.value,
                "eigenvalues": evd.eigenvalues}
    if name == "L_rw":
        evd = evd_random_walk(graph, SortConvention.VALUE_ASC, target="L_rw")
        return {"matrix": "L_rw", "sort_convention": evd.sort_convention.value,
                "eigenvalues": evd.eigenvalues}
    evd = evd_random_walk(graph, SortConvention.ABS_DESC, target="A_rw")
    return {"matrix": "A_rw", "sort_convention": evd.sort_convention.value,
            "eigenvalues": evd.eigenvalues,
            "singular_values": svd(g.random_walk_matrix(graph)).S}


def cmd_spectra(cfg: RunConfig, graph: g.ValidatedGraph, matrix: str = "all") -> ReportDocument:
    if matrix == "all":
        payload = {name: _spectrum_payload(graph, name) for name in ("L", "L_rw", "A_rw")}
        return ReportDocument("spectra", payload, _provenance(cfg, graph))
    return ReportDocument("spectrum", _spectrum_payload(graph, matrix), _provenance(cfg, graph))


def cmd_cluster(cfg: RunConfig, graph: g.ValidatedGraph) -> ReportDocument:
    result = spectral_cluster(graph, _need_k(cfg), seed=cfg.seed)
    payload = {
        "labels": result.labels,
        "k": result.k,
        "inertia": result.inertia,
        "inertia_history": list(result.inertia_history),
        "iterations": result.iterations,
        "ncut": result.ncut,
        "seed": result.seed,
    }
    if graph.node_labels is not None:
        payload["node_labels"] = list(graph.node_labels)
    return ReportDocument("cluster_assignment", payload, _provenance(cfg, graph))


def cmd_verify(cfg: RunConfig, graph: g.ValidatedGraph, theorem: str,
               sweep: bool = False, matrix: str = "A_rw") -> ReportDocument:
    n = graph.num_nodes
    ks = list(range(1, n + 1)) if sweep else [_need_k(cfg)]
    if theorem == "thm1":
        target = g.random_walk_matrix(graph) if matrix == "A_rw" else g.symmetric_normalized_adjacency(graph)
        reports = an.theorem1_sweep(target, cfg.tolerance, ks=ks, matrix_name=matrix)
    else:
        reports = an.theorem2_sweep(graph, cfg.tolerance, cfg.zero_tol, ks=ks)
    prov = _provenance(cfg, graph, theorem=theorem.upper(), matrix=reports[0].matrix)
    if sweep:
        payload = {"theorem_id": theorem.upper(), "reports": [r.to_dict() for r in reports]}
        return ReportDocument("theorem_sweep", payload, prov)
    return ReportDocument("theorem_report", reports[0].to_dict(), prov)


def cmd_signstats(cfg: RunConfig, graph: g.ValidatedGraph) -> ReportDocument:
    stats = an.eigen_sign_stats(graph, cfg.zero_tol)
    return ReportDocument("spectrum_stats", stats.to_dict(), _provenance(cfg, graph))


def cmd_smoothness(cfg: RunConfig, graph: g.ValidatedGraph) -> ReportDocument:
    k = _need_k(cfg)
    reports = [an.smoothness_report(graph, k, src).to_dict() for src in an.BasisSource]
    return ReportDocument("smoothness", {"k": k, "reports": reports}, _provenance(cfg, graph))


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="edge-list path or generator spec, e.g. gen:barbell:5,5")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=an.DEFAULT_TOLERANCE,
                   help="Frobenius comparison tolerance (default 1e-8)")
    p.add_argument("--zero-tol", type=float, default=ZERO_TOL,
                   help="relative zero threshold for eigenvalues (default 1e-10)")
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=[f.value for f in ReportFormat], default="json")
    p.add_argument("--drop-self-loops", action="store_true")
    p.add_argument("--input-format", choices=["edgelist", "matrix"], default="edgelist")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-svd",
        description="Spectral clustering vs SVD: spectra, clustering and theorem checks.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectra", help="spectra of L, L_rw, A_rw and singular values of A_rw")
    _add_common(p)
    p.add_argument("--matrix", choices=SPECTRA_MATRICES, default="all")

    _add_common(sub.add_parser("cluster", help="spectral clustering"))

    p = sub.add_parser("verify", help="theorem checks")
    p.add_argument("theorem", choices=["thm1", "thm2"])
    _add_common(p)
    p.add_argument("--sweep", action="store_true", help="evaluate every k in 1..N")
    p.add_argument("--matrix", choices=["A_rw", "A_sym"], default="A_rw",
                   help="matrix for thm1 (thm2 always uses A_sym)")
    p.add_argument("--expect", choices=[v.value for v in an.Verdict], default=None,
                   help="exit 3 unless every verdict matches")

    _add_common(sub.add_parser("signstats", help="sign counts of the A_rw spectrum"))
    _add_common(sub.add_parser("smoothness", help="smoothness of SC vs SVD bases"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        input=args.input,
        k=args.k,
        seed=args.seed,
        tolerance=args.tolerance,
        zero_tol=args.zero_tol,
        output=args.output,
        format=ReportFormat(args.format),
        drop_self_loops=args.drop_self_loops,
        input_format=args.input_format,
    )
    try:
        graph = load_graph(cfg.input, cfg.seed, cfg.drop_self_loops, cfg.input_format)
        if cfg.command == "spectra":
            doc = cmd_spectra(cfg, graph, args.matrix)
        elif cfg.command == "cluster":
            doc = cmd_cluster(cfg, graph)
        elif cfg.command == "verify":
            doc = cmd_verify(cfg, graph, args.theorem, args.sweep, args.matrix)
        elif cfg.command == "signstats":
            doc = cmd_signstats(cfg, graph)
        else:
            doc = cmd_smoothness(cfg, graph)
        data = write_report(doc, cfg.format)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except (SpectralError, OSError) as exc:
        print(f"spectral-svd: error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if cfg.output:
        Path(cfg.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()

    if cfg.command == "verify" and args.expect is not None:
        payload = doc.payload
        verdicts = [r["verdict"] for r in payload["reports"]] if args.sweep else [payload["verdict"]]
        if any(v != args.expect for v in verdicts):
            print(f"spectral-svd: verdict mismatch, expected {args.expect}", file=sys.stderr)
            return EXIT_EXPECT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
