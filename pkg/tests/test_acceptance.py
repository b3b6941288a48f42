"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the terminal summary (see conftest.py) and by
``scripts/run_acceptance.py``.
"""
import subprocess
import sys
import time

import numpy as np
import pytest

from spectral_svd import analysis as an
from spectral_svd import graph as g
from spectral_svd.clustering import spectral_cluster, spectral_embedding
from spectral_svd.io import parse_edge_list, write_edge_list
from spectral_svd.linalg import (
    ORTHO_TOL,
    RESIDUAL_TOL,
    SortConvention,
    evd_random_walk,
    residuals,
    svd,
    symmetric_evd,
)

import oracles
from helpers import ACCEPTANCE_RESULTS, fixture_graphs, random_graphs


def record(name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def criterion1_graphs():
    return fixture_graphs(50) + random_graphs(50, 200)


@pytest.fixture(scope="module")
def theorem2_graphs():
    return fixture_graphs(12) + random_graphs(20, 40)


def test_criterion_01_l_rw_eigenvalue_range(criterion1_graphs):
    start = time.perf_counter()
    worst_low, worst_high = np.inf, -np.inf
    for _, graph in criterion1_graphs:
        lam = evd_random_walk(graph, SortConvention.VALUE_ASC, target="L_rw").eigenvalues
        worst_low = min(worst_low, float(lam.min()))
        worst_high = max(worst_high, float(lam.max()))
    elapsed = time.perf_counter() - start
    ok = worst_low >= -1e-9 and worst_high <= 2 + 1e-9 and elapsed < 30
    record("criterion 1: L_rw eigenvalues in [0, 2]", ok,
           f"{len(criterion1_graphs)} graphs, min {worst_low:.3e}, max {worst_high:.12f}, {elapsed:.1f}s")


def test_criterion_02_correspondence(criterion1_graphs):
    worst = max(an.correspondence_check(graph) for _, graph in criterion1_graphs)
    record("criterion 2: lambda(A_rw) = 1 - lambda(L_rw)", worst <= 1e-9, f"max deviation {worst:.3e}")


def _distinct_magnitude_symmetric(rng, n):
    while True:
        a = rng.standard_normal((n, n))
        m = (a + a.T) / 2
        mags = np.sort(np.abs(np.linalg.eigvalsh(m)))
        if n == 1 or np.min(np.diff(mags)) > 1e-6:
            return m


def test_criterion_03_theorem1_symmetric():
    rng = np.random.default_rng(2024)
    worst, failures = 0.0, 0
    for i in range(100):
        n = 1 + i % 50
        m = _distinct_magnitude_symmetric(rng, n)
        for rep in an.theorem1_sweep(m, 1e-8):
            worst = max(worst, rep.gap)
            failures += rep.verdict is not an.Verdict.EQUAL
    record("criterion 3: symmetric rank-k SVD == |lambda|-sorted EVD", failures == 0 and worst <= 1e-8,
           f"100 matrices, all k, max gap {worst:.3e}, non-EQUAL {failures}")


def test_criterion_04_theorem1_nonnormal_star():
    a_rw = g.random_walk_matrix(g.generate("star", [4]))
    rep = an.verify_theorem1(a_rw, 1, 1e-8, matrix_name="A_rw")
    sigma1 = svd(a_rw).S[0]
    # exact Gram spectrum {3, 1/3, 0, 0} is the oracle for sigma_1 = sqrt(3)
    exact = oracles.has_spectrum(a_rw.T @ a_rw, [3, "1/3", 0, 0])
    ok = exact and rep.gap >= 0.5 and abs(sigma1 - np.sqrt(3)) <= 1e-9
    record("criterion 4: star A_rw SVD-1 != EVD-1", ok,
           f"gap {rep.gap:.6f}, sigma_1 {sigma1:.15f}, Gram oracle {exact}")


def test_criterion_05_theorem2_biconditional(theorem2_graphs):
    start = time.perf_counter()
    pairs = below = at_full = 0
    exceptions = []
    for name, graph in theorem2_graphs:
        n = graph.num_nodes
        for rep in an.theorem2_sweep(graph, 1e-8):
            if rep.has_abs_tie_at_k:
                continue
            pairs += 1
            if (rep.verdict is an.Verdict.EQUAL) != rep.condition_holds:
                exceptions.append((name, rep.k))
                if rep.k == n:
                    at_full += 1
                else:
                    below += 1

    p3 = an.verify_theorem2(g.generate("path", [3]), 2)
    c4 = an.verify_theorem2(g.generate("cycle", [4]), 2)
    bb = an.verify_theorem2(g.generate("barbell", [5, 5]), 2)
    certified = (
        not p3.condition_holds and p3.verdict is an.Verdict.NOT_EQUAL
        and abs(p3.sc_reconstruction_error - 1) <= 1e-8 and p3.best_error <= 1e-8
        and not c4.condition_holds and c4.verdict is an.Verdict.NOT_EQUAL
        and bb.condition_holds and bb.verdict is an.Verdict.EQUAL
        and all(
            an.verify_theorem2(graph, 1).condition_holds
            and an.verify_theorem2(graph, 1).verdict is an.Verdict.EQUAL
            for _, graph in theorem2_graphs
        )
    )
    elapsed = time.perf_counter() - start
    ok = not exceptions and certified and elapsed < 60
    record("criterion 5: THM2 verdict EQUAL <=> condition", ok,
           f"{pairs} tie-free pairs, exceptions {len(exceptions)} "
           f"(k<N: {below}, k=N: {at_full}), certified cases {certified}, {elapsed:.1f}s")


def test_criterion_06_spectral_clustering():
    bb = g.generate("barbell", [5, 5])
    res = spectral_cluster(bb, 2, seed=0)
    split = len(set(res.labels[:5])) == 1 and len(set(res.labels[5:])) == 1 and res.labels[0] != res.labels[5]
    enumerated = oracles.ncut_by_edge_enumeration(bb.adjacency, res.labels)
    sbm = g.generate("planted_partition", [60, 3, 0.9, 0.02], seed=1)
    sbm_res = spectral_cluster(sbm, 3, seed=1)
    agreement = oracles.best_permutation_agreement(sbm_res.labels, g.planted_labels(60, 3))
    ok = split and abs(res.ncut - 2 / 21) <= 1e-12 and abs(enumerated - 2 / 21) <= 1e-12 and agreement >= 0.95
    record("criterion 6: spectral clustering end-to-end", ok,
           f"barbell ncut {res.ncut:.15f}, SBM agreement {agreement:.4f}")


def test_criterion_07_sign_statistics():
    fractions = [
        an.eigen_sign_stats(g.generate("erdos_renyi", [200, 0.05], seed=s)).positive_fraction
        for s in range(20)
    ]
    bipartite_ok = True
    for _, graph in fixture_graphs(50):
        if g.is_bipartite(graph):
            s = an.eigen_sign_stats(graph)
            bipartite_ok &= s.num_positive == s.num_negative
    mean = float(np.mean(fractions))
    ok = all(0.3 <= f <= 0.7 for f in fractions) and 0.4 <= mean <= 0.6 and bipartite_ok
    record("criterion 7: about half the A_rw eigenvalues positive", ok,
           f"range [{min(fractions):.3f}, {max(fractions):.3f}], mean {mean:.4f}, bipartite balanced {bipartite_ok}")


def test_criterion_08_smoothness():
    worst = 0.0
    for _, graph in fixture_graphs(50):
        emb = spectral_embedding(graph, graph.num_nodes)
        for i in range(emb.k):
            worst = max(worst, abs(an.smoothness(graph, emb.matrix[:, i]) - emb.eigenvalues[i]))
    c4 = g.generate("cycle", [4])
    sc = an.smoothness_report(c4, 2, an.BasisSource.SC_BASES).smoothness
    sv = an.smoothness_report(c4, 2, an.BasisSource.SVD_BASES).smoothness
    c4_ok = np.allclose(sc, [0, 1], atol=1e-12) and np.allclose(sv, [0, 2], atol=1e-12)
    record("criterion 8: smoothness equals L_rw eigenvalue", worst <= 1e-9 and c4_ok,
           f"max deviation {worst:.3e}, C4 SC {np.round(sc, 12).tolist()} vs SVD {np.round(sv, 12).tolist()}")


@pytest.mark.slow
def test_criterion_09_eigensolver_quality(criterion1_graphs):
    worst_res, worst_orth = 0.0, 0.0

    def gate(m, dec):
        nonlocal worst_res, worst_orth
        fro = max(float(np.linalg.norm(m)), 1e-300)
        worst_res = max(worst_res, float(residuals(m, dec.eigenvalues, dec.eigenvectors).max()) / fro)
        if dec.source_symmetric:
            x = dec.eigenvectors
            worst_orth = max(worst_orth, float(np.abs(x.T @ x - np.eye(len(x))).max()))

    for _, graph in criterion1_graphs:
        for m in (g.laplacian(graph), g.symmetric_normalized_adjacency(graph)):
            gate(m, symmetric_evd(m, check=False))
        gate(g.random_walk_laplacian(graph), evd_random_walk(graph, target="L_rw", check=False))

    rng = np.random.default_rng(0)
    a = rng.standard_normal((1000, 1000))
    big = (a + a.T) / 2
    start = time.perf_counter()
    dec = symmetric_evd(big, check=False)
    elapsed = time.perf_counter() - start
    gate(big, dec)
    ok = worst_res <= RESIDUAL_TOL and worst_orth <= ORTHO_TOL and elapsed < 120
    record("criterion 9: eigensolver residual/orthonormality, N=1000 timing", ok,
           f"residual/||M||_F {worst_res:.3e}, orthonormality {worst_orth:.3e}, N=1000 EVD {elapsed:.1f}s")


CLI_RUNS = [
    ["spectra", "gen:barbell:5,5"],
    ["cluster", "gen:sbm:60,3,0.9,0.02", "--k", "3", "--seed", "1"],
    ["verify", "thm2", "gen:er:30,0.2", "--sweep", "--seed", "5"],
    ["signstats", "gen:er:200,0.05", "--seed", "3", "--format", "csv"],
    ["smoothness", "gen:cycle:8", "--k", "3"],
]


def test_criterion_10_determinism():
    identical = True
    for argv in CLI_RUNS:
        outs = [
            subprocess.run([sys.executable, "-m", "spectral_svd.cli", *argv],
                           capture_output=True, check=True).stdout
            for _ in range(2)
        ]
        identical &= outs[0] == outs[1] and len(outs[0]) > 0
    round_trip = all(
        parse_edge_list(write_edge_list(graph), sort_ids=True).to_graph().adjacency.tobytes()
        == graph.adjacency.tobytes()
        for _, graph in fixture_graphs(50)
    )
    record("criterion 10: byte-identical reports, exact edge-list round trip", identical and round_trip,
           f"{len(CLI_RUNS)} CLI runs identical {identical}, round trip {round_trip}")
