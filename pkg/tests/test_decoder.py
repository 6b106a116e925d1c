import json

import numpy as np
import pytest

from tecsim import cellcomplex as cc
from tecsim import decoder as dec
from tecsim import graphstate as gs
from tecsim.noise import ErrorPattern

from conftest import l8_qubit

# Syndrome quadruples (C13, C34, C1'3', C3'4') for each single face error.
SINGLE_ERROR_TABLE = {
    "1": (-1, 1, 1, 1),
    "3": (-1, -1, 1, 1),
    "4": (1, -1, 1, 1),
    "1'": (1, 1, -1, 1),
    "3'": (1, 1, -1, -1),
    "4'": (1, 1, 1, -1),
}


def syndrome_quad(l8, syndrome):
    order = [l8.id_of(v) for v in ("w", "v", "y", "z")]
    return tuple(syndrome.bits[v] for v in order)


def pattern(l8, l8_graph, *names):
    return ErrorPattern(frozenset(l8_qubit(l8, l8_graph, n) for n in names))


# -- syndrome extraction -------------------------------------------------------


@pytest.mark.parametrize("name", list(SINGLE_ERROR_TABLE))
def test_single_error_syndromes(l8, l8_graph, name):
    syndrome = dec.extract_syndrome(l8, l8_graph, pattern(l8, l8_graph, name))
    assert syndrome_quad(l8, syndrome) == SINGLE_ERROR_TABLE[name]


def test_empty_error_gives_clear_syndrome(l8, l8_graph):
    syndrome = dec.extract_syndrome(l8, l8_graph, ErrorPattern(frozenset()))
    assert syndrome.is_clear()
    assert syndrome_quad(l8, syndrome) == (1, 1, 1, 1)


def test_two_error_syndrome_is_product_of_rows(l8, l8_graph):
    syndrome = dec.extract_syndrome(l8, l8_graph, pattern(l8, l8_graph, "1", "3"))
    combined = tuple(
        a * b for a, b in zip(SINGLE_ERROR_TABLE["1"], SINGLE_ERROR_TABLE["3"])
    )
    assert syndrome_quad(l8, syndrome) == combined == (1, -1, 1, 1)


def test_edge_error_hits_only_dual_bit(l8, l8_graph):
    err = pattern(l8, l8_graph, "2")
    syndrome = dec.extract_syndrome(l8, l8_graph, err)
    assert syndrome.is_clear()
    assert dec.dual_parity(l8_graph, err) == -1
    assert dec.dual_parity(l8_graph, pattern(l8, l8_graph, "2", "2'")) == 1
    assert dec.dual_parity(l8_graph, pattern(l8, l8_graph, "1")) == 1


# -- lookup decoding -------------------------------------------------------------


@pytest.mark.parametrize("name", list(SINGLE_ERROR_TABLE))
def test_lookup_recovers_every_single_error(l8, l8_graph, name):
    err = pattern(l8, l8_graph, name)
    syndrome = dec.extract_syndrome(l8, l8_graph, err)
    correction = dec.decode_lookup_l8(l8, l8_graph, syndrome)
    assert correction.flipped == err.flipped


def test_lookup_clear_syndrome_gives_empty_correction(l8, l8_graph):
    syndrome = dec.extract_syndrome(l8, l8_graph, ErrorPattern(frozenset()))
    assert dec.decode_lookup_l8(l8, l8_graph, syndrome).flipped == frozenset()


@pytest.mark.parametrize("quad,expected", [
    ((-1, 1, 1, 1), {"f1"}),
    ((-1, -1, 1, 1), {"f3"}),
    ((1, -1, 1, 1), {"f4"}),
    ((1, 1, 1, 1), set()),
    ((1, 1, -1, 1), {"f1'"}),
    ((1, 1, -1, -1), {"f3'"}),
    ((1, 1, 1, -1), {"f4'"}),
    ((-1, 1, 1, -1), {"f1", "f4'"}),
])
def test_lookup_table_rows_directly(l8, l8_graph, quad, expected):
    # Quadruple order (C13, C34, C1'3', C3'4') = volumes (w, v, y, z).
    bits = {l8.id_of(v): b for v, b in zip(("w", "v", "y", "z"), quad)}
    correction = dec.decode_lookup_l8(l8, l8_graph, dec.Syndrome(bits))
    labels = {l8.label_of(l8_graph.qubit_cell(q)) for q in correction.flipped}
    assert labels == expected


def test_lookup_rejects_malformed_syndrome(l8, l8_graph):
    with pytest.raises(dec.InvalidSyndromeError):
        dec.decode_lookup_l8(l8, l8_graph, dec.Syndrome({1: -1}))
    good = dec.extract_syndrome(l8, l8_graph, ErrorPattern(frozenset()))
    with pytest.raises(dec.InvalidSyndromeError):
        dec.decode_lookup_l8(l8, l8_graph, good, dual=0)


def test_side_independence(l8, l8_graph):
    # Decoding of the unprimed side never depends on primed-side errors.
    import itertools
    unprimed = ["1", "3", "4"]
    primed = ["1'", "3'", "4'"]
    unprimed_qubits = {l8_qubit(l8, l8_graph, n) for n in unprimed}
    for r in range(4):
        for left in itertools.combinations(unprimed, r):
            base = None
            for s in range(4):
                for right in itertools.combinations(primed, s):
                    err = pattern(l8, l8_graph, *(left + right))
                    syndrome = dec.extract_syndrome(l8, l8_graph, err)
                    corr = dec.decode_lookup_l8(l8, l8_graph, syndrome)
                    left_part = corr.flipped & unprimed_qubits
                    if base is None:
                        base = left_part
                    assert left_part == base


def test_pipeline_report_success_and_flag(l8, l8_graph):
    protected = l8.chain(cc.DIM_FACE, ["f1", "f1'"])
    report = dec.run_pipeline(l8, l8_graph, pattern(l8, l8_graph, "3"), protected, "lookup_l8")
    assert report.success and not report.detected_uncorrectable
    assert report.residual.flipped == frozenset()

    # Edge error: detected but uncorrectable, correlation itself survives.
    report = dec.run_pipeline(l8, l8_graph, pattern(l8, l8_graph, "2"), protected, "lookup_l8")
    assert report.detected_uncorrectable and report.success

    # Two errors on one side fool the lookup and flip the protected pair.
    report = dec.run_pipeline(l8, l8_graph, pattern(l8, l8_graph, "1", "3"), protected, "lookup_l8")
    assert not report.success
    assert report.residual.flipped == {
        l8_qubit(l8, l8_graph, n) for n in ("1", "3", "4")
    }


def test_report_json_shape(l8, l8_graph):
    protected = l8.chain(cc.DIM_FACE, ["f1", "f1'"])
    report = dec.run_pipeline(l8, l8_graph, pattern(l8, l8_graph, "4'"), protected, "lookup_l8")
    payload = json.loads(dec.report_to_json(l8, report))
    assert set(payload) == {
        "syndrome", "correction", "residual", "success", "detected_uncorrectable",
    }
    assert payload["syndrome"] == {"v": 1, "w": 1, "y": 1, "z": -1}
    assert payload["success"] is True


# -- logical success ---------------------------------------------------------------


def test_logical_success_cases(l8, l8_graph):
    protected = l8.chain(cc.DIM_FACE, ["f1", "f1'"])
    ok = dec.logical_success(l8, l8_graph, protected,
                             pattern(l8, l8_graph, "3", "4"))
    assert ok  # residual off the protected support
    bad = dec.logical_success(l8, l8_graph, protected, pattern(l8, l8_graph, "1"))
    assert not bad
    assert dec.logical_success(l8, l8_graph, protected, ErrorPattern(frozenset()))


def test_logical_success_requires_cycle(l8, l8_graph):
    not_cycle = l8.chain(cc.DIM_FACE, ["f1"])
    with pytest.raises(ValueError):
        dec.logical_success(l8, l8_graph, not_cycle, ErrorPattern(frozenset()))


# -- matching -----------------------------------------------------------------------


@pytest.fixture(scope="module")
def torus():
    cplx = cc.build_cubic(3, 3, 3, periodic=True)
    graph = gs.graph_from_complex(cplx)
    return cplx, graph, dec.CubicMatcher(cplx, graph)


@pytest.fixture(scope="module")
def open_box():
    cplx = cc.build_cubic(3, 3, 3)
    graph = gs.graph_from_complex(cplx)
    return cplx, graph, dec.CubicMatcher(cplx, graph)


def test_clear_syndrome_decodes_to_empty(torus):
    cplx, graph, matcher = torus
    syndrome = dec.extract_syndrome(cplx, graph, ErrorPattern(frozenset()))
    assert matcher.decode(syndrome).flipped == frozenset()


def test_single_error_exact_on_torus(torus):
    cplx, graph, matcher = torus
    for q in graph.kind_qubits(gs.FACE):
        err = ErrorPattern(frozenset({q}))
        syndrome = dec.extract_syndrome(cplx, graph, err)
        assert len(syndrome.defects) == 2
        correction = matcher.decode(syndrome)
        assert correction.flipped == err.flipped
        assert correction.exact


def test_single_bulk_error_exact_on_open_box(open_box):
    cplx, graph, matcher = open_box
    # Bulk face: both incident volumes exist, the unique shortest path is the
    # errored face itself.
    bulk = [q for q, vols in matcher.face_incidence.items() if len(vols) == 2]
    assert bulk
    for q in bulk:
        err = ErrorPattern(frozenset({q}))
        syndrome = dec.extract_syndrome(cplx, graph, err)
        correction = matcher.decode(syndrome)
        assert correction.flipped == err.flipped


def test_boundary_error_clears_syndrome_on_open_box(open_box):
    cplx, graph, matcher = open_box
    surface = [q for q, vols in matcher.face_incidence.items() if len(vols) == 1]
    assert surface
    for q in surface[:20]:
        err = ErrorPattern(frozenset({q}))
        syndrome = dec.extract_syndrome(cplx, graph, err)
        correction = matcher.decode(syndrome)
        residual = ErrorPattern(err.flipped ^ correction.flipped)
        assert dec.extract_syndrome(cplx, graph, residual).is_clear()


def test_two_face_chain_recovers_equivalent_correction():
    # Two stacked z-normal faces on a tall torus: the straight-through
    # matching is strictly cheaper than wrapping, so recovery is exact and
    # the residual is trivially equivalent to the empty chain.
    cplx = cc.build_cubic(2, 2, 5, periodic=True)
    graph = gs.graph_from_complex(cplx)
    matcher = dec.CubicMatcher(cplx, graph)
    q1 = graph.cell_to_qubit[cplx.id_of("f:z:0,0,1")]
    q2 = graph.cell_to_qubit[cplx.id_of("f:z:0,0,2")]
    err = ErrorPattern(frozenset({q1, q2}))
    syndrome = dec.extract_syndrome(cplx, graph, err)
    assert len(syndrome.defects) == 2
    correction = matcher.decode(syndrome)
    assert correction.flipped == err.flipped
    residual = err.flipped ^ correction.flipped
    chain = cc.Chain(cc.DIM_FACE, frozenset(graph.qubit_cell(q) for q in residual))
    assert cc.is_cycle(cplx, chain)
    assert cc.homologous(cplx, chain, cc.Chain(cc.DIM_FACE, frozenset()))


def test_matching_clears_random_syndromes(torus, open_box):
    rng = np.random.default_rng(17)
    for cplx, graph, matcher in (torus, open_box):
        faces = graph.kind_qubits(gs.FACE)
        for _ in range(60):
            err = ErrorPattern(frozenset(
                int(q) for q in faces if rng.random() < 0.08
            ))
            syndrome = dec.extract_syndrome(cplx, graph, err)
            correction = matcher.decode(syndrome)
            residual = ErrorPattern(err.flipped ^ correction.flipped)
            assert dec.extract_syndrome(cplx, graph, residual).is_clear()


def test_odd_defect_parity_rejected_on_closed_lattice(torus):
    cplx, graph, matcher = torus
    volumes = cplx.retained_cells(cc.DIM_VOLUME)
    bits = {v: 1 for v in volumes}
    bits[volumes[0]] = -1
    with pytest.raises(dec.InvalidSyndromeError):
        matcher.decode(dec.Syndrome(bits))


def test_greedy_fallback_flags_and_clears(open_box):
    cplx, graph, matcher = open_box
    rng = np.random.default_rng(23)
    faces = list(graph.kind_qubits(gs.FACE))
    # Drive the defect count above the exact-matching limit.
    for _ in range(20):
        err = ErrorPattern(frozenset(rng.choice(faces, size=40, replace=False).tolist()))
        syndrome = dec.extract_syndrome(cplx, graph, err)
        if len(syndrome.defects) <= dec.EXACT_MATCH_LIMIT:
            continue
        correction = matcher.decode(syndrome)
        assert not correction.exact
        residual = ErrorPattern(err.flipped ^ correction.flipped)
        assert dec.extract_syndrome(cplx, graph, residual).is_clear()


def test_matching_deterministic(torus):
    cplx, graph, matcher = torus
    rng = np.random.default_rng(29)
    faces = graph.kind_qubits(gs.FACE)
    for _ in range(20):
        err = ErrorPattern(frozenset(int(q) for q in faces if rng.random() < 0.1))
        syndrome = dec.extract_syndrome(cplx, graph, err)
        first = matcher.decode(syndrome)
        fresh = dec.CubicMatcher(cplx, graph)
        assert fresh.decode(syndrome).flipped == first.flipped


def test_defect_indices_match_extract_syndrome(torus):
    cplx, graph, matcher = torus
    rng = np.random.default_rng(31)
    faces = graph.kind_qubits(gs.FACE)
    for _ in range(40):
        qubits = [int(q) for q in faces if rng.random() < 0.1]
        syndrome = dec.extract_syndrome(cplx, graph, ErrorPattern(frozenset(qubits)))
        via_toggle = {matcher.volumes[i] for i in matcher.defect_indices(qubits)}
        assert via_toggle == set(syndrome.defects)


def test_carved_lattice_matches_into_defect_boundary():
    # A carved line turns adjacent faces into boundary terminals.
    defects = cc.line_defect(3, 3, 3, 1, 1)
    cplx = cc.build_cubic(3, 3, 3, defects=defects)
    graph = gs.graph_from_complex(cplx)
    matcher = dec.CubicMatcher(cplx, graph)
    assert matcher.has_boundary
    rng = np.random.default_rng(37)
    faces = graph.kind_qubits(gs.FACE)
    for _ in range(30):
        err = ErrorPattern(frozenset(int(q) for q in faces if rng.random() < 0.06))
        syndrome = dec.extract_syndrome(cplx, graph, err)
        correction = matcher.decode(syndrome)
        residual = ErrorPattern(err.flipped ^ correction.flipped)
        assert dec.extract_syndrome(cplx, graph, residual).is_clear()
