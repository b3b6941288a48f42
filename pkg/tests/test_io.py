import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_svd import analysis as an
from spectral_svd import graph as g
from spectral_svd.errors import ParseError, SelfLoop, UnsupportedPayloadForCsv
from spectral_svd.io import (
    ReportDocument,
    format_float,
    parse_adjacency_matrix,
    parse_edge_list,
    parse_report,
    write_edge_list,
    write_report,
)
from spectral_svd.linalg import SortConvention, evd_random_walk

from helpers import fixture_graphs, random_graphs


# ---------------------------------------------------------------------------
# edge lists

def test_parse_path():
    doc = parse_edge_list(b"0 1\n1 2\n")
    np.testing.assert_array_equal(doc.to_graph().adjacency, g.generate("path", [3]).adjacency)


def test_parse_duplicate_edges_summed():
    doc = parse_edge_list("0 1 2.5\n1 0 0.5\n")
    assert doc.edges == [(0, 1, 3.0)]


def test_parse_self_loop():
    with pytest.raises(SelfLoop) as info:
        parse_edge_list("0 0\n")
    assert info.value.line == 1
    doc = parse_edge_list("0 1\n1 1\n", drop_self_loops=True)
    assert doc.dropped_self_loops == 1 and doc.edges == [(0, 1, 1.0)]


def test_parse_comments_blank_lines_and_compaction():
    text = "# header\n% other\n\n10 30 2\n30 20\n"
    doc = parse_edge_list(text)
    assert doc.comment_count == 2
    assert doc.labels == [10, 30, 20]
    assert doc.edges == [(0, 1, 2.0), (1, 2, 1.0)]
    assert parse_edge_list(text, sort_ids=True).labels == [10, 20, 30]


@pytest.mark.parametrize("text, line", [
    ("0 1\n1\n", 2),
    ("0 1\n# c\n1 2 3 4\n", 3),
    ("0 1.5\n", 1),
    ("0 -1\n", 1),
    ("a b\n", 1),
    ("0 1\n1 2 -2\n", 2),
    ("0 1 0\n", 1),
    ("0 1 nan\n", 1),
    ("0 1 inf\n", 1),
    ("0 1 x\n", 1),
    ("\n\n0 1\n\n2 3 1e\n", 5),
])
def test_parse_errors_carry_line_number(text, line):
    with pytest.raises(ParseError) as info:
        parse_edge_list(text)
    assert info.value.line == line


def test_parse_rejects_non_utf8():
    with pytest.raises(ParseError):
        parse_edge_list(b"0 1\n\xff\xfe\n")


@pytest.mark.parametrize("name, graph", fixture_graphs(12) + random_graphs(6, 40),
                         ids=lambda x: x if isinstance(x, str) else "")
def test_edge_list_round_trip(name, graph):
    back = parse_edge_list(write_edge_list(graph), sort_ids=True).to_graph()
    assert back.adjacency.tobytes() == graph.adjacency.tobytes()


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.data())
def test_weighted_edge_list_round_trip(n, data):
    weights = data.draw(st.lists(st.floats(1e-6, 1e6), min_size=n - 1, max_size=n - 1))
    graph = g.validate(g.Graph.from_edges(n, [(i, i + 1, w) for i, w in enumerate(weights)]))
    back = parse_edge_list(write_edge_list(graph), sort_ids=True).to_graph()
    assert back.adjacency.tobytes() == graph.adjacency.tobytes()


def test_parse_adjacency_matrix():
    graph = parse_adjacency_matrix("# P3\n0 1 0\n1 0 1\n0 1 0\n")
    np.testing.assert_array_equal(graph.adjacency, g.generate("path", [3]).adjacency)
    with pytest.raises(ParseError) as info:
        parse_adjacency_matrix("0 1\n1 0 1\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_adjacency_matrix("0 x\nx 0\n")
    with pytest.raises(ParseError):
        parse_adjacency_matrix("0 1 1\n1 0 1\n")


# ---------------------------------------------------------------------------
# reports

def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(2.0) == "2.0"
    assert format_float(-0.0) == "0.0"
    assert format_float(1e300) == "1.0000000000000001e+300"
    with pytest.raises(ValueError):
        format_float(float("nan"))


@settings(max_examples=300)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_float_round_trips_bits(x):
    y = float(format_float(x))
    assert y == x
    if x != 0.0:
        assert np.float64(y).tobytes() == np.float64(x).tobytes()


def _k2_spectrum_doc():
    evd = evd_random_walk(g.generate("path", [2]), SortConvention.VALUE_ASC, target="L_rw")
    payload = {"matrix": "L_rw", "sort_convention": "VALUE_ASC", "eigenvalues": evd.eigenvalues}
    return ReportDocument("spectrum", payload, {"input": "gen:path:2", "seed": 0})


def test_csv_k2_l_rw_spectrum():
    text = write_report(_k2_spectrum_doc(), "csv").decode()
    lines = text.splitlines()
    assert lines[0] == "index,eigenvalue"
    idx, value = lines[1].split(",")
    assert idx == "0" and abs(float(value)) <= 1e-15
    idx, value = lines[2].split(",")
    assert idx == "1" and float(value) == pytest.approx(2.0, abs=1e-15)
    assert text.endswith("\n")


def test_json_is_deterministic_and_sorted():
    doc = _k2_spectrum_doc()
    a, b = write_report(doc), write_report(doc)
    assert a == b and a.endswith(b"\n")
    obj = json.loads(a)
    assert list(obj) == sorted(obj)
    assert list(obj["payload"]) == sorted(obj["payload"])


def test_theorem_report_json_keys():
    rep = an.verify_theorem2(g.generate("path", [3]), 2)
    obj = json.loads(write_report(ReportDocument("theorem_report", rep.to_dict())))
    for key in ("condition_holds", "verdict", "gap", "tolerance"):
        assert key in obj["payload"]
    assert obj["payload"]["verdict"] == "NOT_EQUAL"
    csv_text = write_report(ReportDocument("theorem_report", rep.to_dict()), "csv").decode()
    assert "condition_holds" in csv_text.splitlines()[0]


def test_nested_spectra_bundle_is_json_only():
    doc = ReportDocument("spectra", {"L": {"eigenvalues": [0.0]}})
    write_report(doc, "json")
    with pytest.raises(UnsupportedPayloadForCsv):
        write_report(doc, "csv")


json_leaves = (
    st.floats(allow_nan=False, allow_infinity=False)
    | st.integers(-(2**63), 2**63 - 1)
    | st.booleans()
    | st.none()
    | st.text(max_size=8)
)
json_values = st.recursive(
    json_leaves,
    lambda inner: st.lists(inner, max_size=4) | st.dictionaries(st.text(max_size=6), inner, max_size=4),
    max_leaves=20,
)


@settings(max_examples=200)
@given(st.dictionaries(st.text(max_size=6), json_values, max_size=5),
       st.dictionaries(st.text(max_size=6), json_leaves, max_size=4))
def test_report_round_trip_is_byte_identical(payload, provenance):
    doc = ReportDocument("custom", payload, provenance)
    first = write_report(doc)
    second = write_report(parse_report(first))
    assert first == second


@pytest.mark.parametrize("kind, payload", [
    ("cluster_assignment", {"labels": [0, 1, 1], "k": 2}),
    ("spectrum_stats", {"n": 4, "num_positive": 1, "num_negative": 1, "num_zero": 2,
                        "zero_tolerance": 1e-10, "positive_fraction": 0.25}),
])
def test_csv_payload_kinds(kind, payload):
    text = write_report(ReportDocument(kind, payload), "csv").decode()
    assert len(text.splitlines()) >= 2
