import itertools

import numpy as np
import pytest

from tecsim import cellcomplex as cc
from tecsim import graphstate as gs
from tecsim import statevector as sv
from tecsim.graphstate import PauliOp

from conftest import l8_qubit


# -- graph derivation ---------------------------------------------------------


def test_elementary_graph_is_18_qubits(elementary_graph):
    faces = elementary_graph.kind_qubits(gs.FACE)
    edges = elementary_graph.kind_qubits(gs.EDGE)
    assert len(faces) == 6 and len(edges) == 12
    for q in faces:
        assert len(elementary_graph.neighbors(q)) == 4
    for q in edges:
        assert len(elementary_graph.neighbors(q)) == 2


def test_l8_graph_structure(l8_graph):
    faces = l8_graph.kind_qubits(gs.FACE)
    edges = l8_graph.kind_qubits(gs.EDGE)
    assert len(faces) == 6 and len(edges) == 2
    for q in faces:
        assert set(l8_graph.neighbors(q)) == set(edges)
    for q in edges:
        assert len(l8_graph.neighbors(q)) == 6


def test_face_qubits_come_first(l8_graph):
    kinds = [r.kind for r in l8_graph.qubits]
    assert kinds == [gs.FACE] * 6 + [gs.EDGE] * 2


def test_no_face_face_or_edge_edge_links(elementary_graph):
    kind = {r.qubit: r.kind for r in elementary_graph.qubits}
    for a, b in elementary_graph.edges:
        assert {kind[a], kind[b]} == {gs.FACE, gs.EDGE}


def test_graph_with_no_faces_has_isolated_edge_qubits():
    # Two sites joined by one edge: a complex with no faces at all.
    cells = [
        cc.Cell(0, 0, frozenset()),
        cc.Cell(1, 0, frozenset()),
        cc.Cell(2, 1, frozenset({0, 1})),
    ]
    cplx = cc.CellComplex(cells)
    graph = gs.graph_from_complex(cplx)
    assert graph.n == 1
    assert graph.edges == frozenset()


def test_removed_qubits_excluded_from_graph():
    cplx = cc.build_cubic(2, 2, 2, defects=["f:z:0,0,1"])
    graph = gs.graph_from_complex(cplx)
    full = cc.build_cubic(2, 2, 2)
    assert graph.n == gs.graph_from_complex(full).n - 1
    assert cplx.id_of("f:z:0,0,1") not in graph.cell_to_qubit


# -- Pauli algebra -------------------------------------------------------------


def test_pauli_string_round_trip():
    for text in ("XIZZXIII", "-XIZZXIII", "IIII", "YZXI"):
        op = PauliOp.from_string(text)
        assert str(op) == text.lstrip("+")
    assert PauliOp.from_string("−XI").sign == -1  # unicode minus accepted


def test_pauli_multiplication_table():
    X = PauliOp.from_string("X")
    Y = PauliOp.from_string("Y")
    Z = PauliOp.from_string("Z")
    assert (X * Y).phase == 1 and (X * Y).letter(0) == "Z"   # XY = iZ
    assert (Y * X).phase == 3 and (Y * X).letter(0) == "Z"   # YX = -iZ
    assert (Y * Z).phase == 1 and (Y * Z).letter(0) == "X"
    assert (Z * X).phase == 1 and (Z * X).letter(0) == "Y"
    assert (X * X).phase == 0 and (X * X).letter(0) == "I"


def test_pauli_product_matches_matrices():
    mats = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
            "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}
    rng = np.random.default_rng(0)
    letters = "IXYZ"
    for _ in range(40):
        a = "".join(rng.choice(list(letters), 3))
        b = "".join(rng.choice(list(letters), 3))
        pa, pb = PauliOp.from_string(a), PauliOp.from_string(b)
        prod = pa * pb
        ma = mats[a[0]]
        mb = mats[b[0]]
        for i in range(1, 3):
            ma = np.kron(np.asarray(mats[a[i]]), ma)
            mb = np.kron(np.asarray(mats[b[i]]), mb)
        expected = ma @ mb
        got = np.eye(1)
        for i in range(3):
            got = np.kron(np.asarray(mats[prod.letter(i)]), got)
        got = (1j ** prod.phase) * got
        assert np.allclose(got, expected)


def test_commutation_via_symplectic_form():
    a = PauliOp.from_string("XXI")
    assert not a.commutes_with(PauliOp.from_string("ZII"))
    assert not a.commutes_with(PauliOp.from_string("IZX"))
    assert a.commutes_with(PauliOp.from_string("ZZI"))
    assert a.commutes_with(PauliOp.from_string("IIZ"))


def test_imaginary_phase_rejected():
    op = PauliOp.from_string("X") * PauliOp.from_string("Z")
    assert not op.is_hermitian
    with pytest.raises(gs.PhaseError):
        op.sign


# -- stabilizer groups ----------------------------------------------------------


def test_l8_generator_for_f1(l8, l8_graph, l8_group):
    q = l8_qubit(l8, l8_graph, "1")
    gen = l8_group.generators[q]
    assert gen.letter(q) == "X"
    for e in ("2", "2'"):
        assert gen.letter(l8_qubit(l8, l8_graph, e)) == "Z"
    assert gen.weight == 3 and gen.sign == 1


def test_single_isolated_qubit_generator():
    cells = [cc.Cell(0, 0, frozenset()), cc.Cell(1, 0, frozenset()),
             cc.Cell(2, 1, frozenset({0, 1}))]
    graph = gs.graph_from_complex(cc.CellComplex(cells))
    group = gs.stabilizer_generators(graph)
    assert str(group.generators[0]) == "X"


def test_generators_pairwise_commute(l8_group, elementary_graph):
    group18 = gs.stabilizer_generators(elementary_graph)
    for grp in (l8_group, group18):
        for a, b in itertools.combinations(grp.generators, 2):
            assert a.commutes_with(b)


def test_generator_count_must_match_qubits(l8_group):
    with pytest.raises(ValueError):
        gs.StabilizerGroup(l8_group.generators[:-1])


# -- correlations ----------------------------------------------------------------


def test_six_face_product_on_elementary(elementary_graph):
    group = gs.stabilizer_generators(elementary_graph)
    faces = elementary_graph.kind_qubits(gs.FACE)
    assert gs.correlation(group, PauliOp.x_on(group.n, faces)) == 1


def test_l8_correlations(l8, l8_graph, l8_group):
    q = lambda name: l8_qubit(l8, l8_graph, name)
    assert gs.correlation(l8_group, PauliOp.x_on(8, [q("1"), q("1'")])) == 1
    assert gs.correlation(l8_group, PauliOp.x_on(8, [q("2"), q("2'")])) == 1
    assert gs.correlation(l8_group, PauliOp.x_on(8, [q("1")])) == 0
    # negated member picks up the sign
    member = PauliOp.from_letters(8, {q("1"): "X", q("1'"): "X"}, sign=-1)
    assert gs.correlation(l8_group, member) == -1


def test_syndrome_pairs_are_plus_one(l8, l8_graph, l8_group):
    q = lambda name: l8_qubit(l8, l8_graph, name)
    for pair in (("1", "3"), ("3", "4"), ("3'", "1'"), ("4'", "3'")):
        op = PauliOp.x_on(8, [q(pair[0]), q(pair[1])])
        assert gs.correlation(l8_group, op) == 1


def test_correlation_dimension_mismatch(l8_group):
    with pytest.raises(ValueError):
        l8_group.member_sign(PauliOp.x_on(4, [0]))


def test_correlation_zero_for_odd_face_products(l8_group):
    # Any odd set of face-qubit X operators leaves unmatched Z support.
    for qubits in ([0], [0, 1, 2], [0, 1, 2, 3, 4]):
        assert gs.correlation(l8_group, PauliOp.x_on(8, qubits)) == 0


# -- surface operators -------------------------------------------------------------


def test_surface_operator_l8(l8, l8_graph):
    chain = l8.chain(cc.DIM_FACE, ["f1", "f3"])
    op = gs.surface_operator(l8, l8_graph, chain)
    assert str(op).count("X") == 2 and op.sign == 1


def test_surface_operator_empty_chain(l8, l8_graph):
    op = gs.surface_operator(l8, l8_graph, cc.Chain(cc.DIM_FACE, frozenset()))
    assert op == PauliOp.identity(8)


def test_surface_operator_removed_qubit_errors():
    cplx = cc.build_cubic(2, 2, 2, defects=["f:z:0,0,1"])
    graph = gs.graph_from_complex(cplx)
    chain = cc.Chain(cc.DIM_FACE, frozenset({cplx.id_of("f:z:0,0,1")}))
    with pytest.raises(gs.RemovedQubitError):
        gs.surface_operator(cplx, graph, chain)


def test_all_volume_boundary_sums_have_unit_correlation(l8, l8_graph, l8_group):
    volumes = l8.dim_cells(cc.DIM_VOLUME)
    for mask in range(16):
        chain = cc.Chain(cc.DIM_VOLUME, frozenset(
            volumes[i] for i in range(4) if (mask >> i) & 1
        ))
        surface = cc.boundary(l8, chain)
        op = gs.surface_operator(l8, l8_graph, surface)
        assert gs.correlation(l8_group, op) == 1


def test_homologous_surfaces_share_correlation(l8, l8_graph, l8_group):
    a = l8.chain(cc.DIM_FACE, ["f4", "f3"])
    b = l8.chain(cc.DIM_FACE, ["f3", "f1"])
    assert cc.homologous(l8, a, b)
    ca = gs.correlation(l8_group, gs.surface_operator(l8, l8_graph, a))
    cb = gs.correlation(l8_group, gs.surface_operator(l8, l8_graph, b))
    assert ca == cb == 1


def test_error_covariance_against_statevector(l8, l8_graph, l8_group, l8_state):
    # Flipping X outcomes on an error pattern multiplies the surface
    # correlation by (-1)^(overlap); cross-checked on the dense state.
    rng = np.random.default_rng(12)
    faces = l8_graph.kind_qubits(gs.FACE)
    volumes = l8.dim_cells(cc.DIM_VOLUME)
    for _ in range(25):
        error = [q for q in faces if rng.random() < 0.5]
        mask = rng.integers(1, 16)
        chain = cc.Chain(cc.DIM_VOLUME, frozenset(
            volumes[i] for i in range(4) if (mask >> i) & 1
        ))
        surface = cc.boundary(l8, chain)
        op = gs.surface_operator(l8, l8_graph, surface)
        surface_qubits = {l8_graph.cell_to_qubit[c] for c in surface.support}
        expected = (-1) ** len(surface_qubits & set(error))
        flipped_state = sv.apply_pauli(l8_state, error, "Z")
        assert sv.pauli_expectation(flipped_state, op) == pytest.approx(expected, abs=sv.ATOL)
