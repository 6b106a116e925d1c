"""Cluster-state stabilizers and topological correlations, by two engines.

Derives the interaction graph and stabilizer group from a cell complex and
shows that X products over closed surfaces have expectation +1, while
individual face measurements are random (expectation 0).  Every number is
computed twice: symbolically in the stabilizer formalism and numerically on
the dense statevector.
"""

from tecsim import cellcomplex as cc
from tecsim import graphstate as gs
from tecsim import statevector as sv

# One qubit per face and per edge; a graph edge wherever an edge cell lies
# on a face's boundary.  The elementary cell gives the 18-qubit cluster.
cell = cc.build_elementary_cell()
graph18 = gs.graph_from_complex(cell)
print("elementary-cell cluster:", graph18.n, "qubits,",
      len(graph18.edges), "interaction edges")

group18 = gs.stabilizer_generators(graph18)
state18 = sv.prepare_graph_state(graph18)

# The product of X over all 6 face qubits multiplies out all Z factors.
faces = graph18.kind_qubits(gs.FACE)
op = gs.PauliOp.x_on(graph18.n, faces)
print("<X1 X2 ... X6> stabilizer:", gs.correlation(group18, op))
print("<X1 X2 ... X6> statevector: %.9f" % sv.pauli_expectation(state18, op))

# A single face measurement is random.
single = gs.PauliOp.x_on(graph18.n, faces[:1])
print("<X1> stabilizer:", gs.correlation(group18, single))
print("<X1> statevector: %.9f" % sv.pauli_expectation(state18, single))

# The 8-qubit lattice: every sum of volume boundaries is a closed surface
# with correlation +1; the defect-enclosing pair {f1, f1'} too.
l8 = cc.build_l8()
graph8 = gs.graph_from_complex(l8)
group8 = gs.stabilizer_generators(graph8)
state8 = sv.prepare_graph_state(graph8)

volumes = l8.dim_cells(cc.DIM_VOLUME)
print("\nclosed-surface correlations on the 8-qubit lattice:")
for mask in range(1, 16):
    chain = cc.Chain(cc.DIM_VOLUME, frozenset(
        volumes[i] for i in range(4) if (mask >> i) & 1))
    surface = cc.boundary(l8, chain)
    op = gs.surface_operator(l8, graph8, surface)
    names = "+".join(sorted(l8.label_of(c) for c in surface.support))
    both = (gs.correlation(group8, op), sv.pauli_expectation(state8, op))
    print(f"  {names:<22} stabilizer {both[0]:+d}   statevector {both[1]:+.6f}")

protected = gs.surface_operator(l8, graph8, l8.chain(cc.DIM_FACE, ["f1", "f1'"]))
print("protected pair <X1 X1'>:", gs.correlation(group8, protected))

# A flipped qubit flips exactly the correlations whose surface contains it.
flipped = sv.apply_pauli(state8, [0], "Z")  # qubit 0 sits on f1
print("\nafter a Z error on f1's qubit:")
print("  <X1 X1'> =", round(sv.pauli_expectation(flipped, protected)))
syndrome_surface = gs.surface_operator(l8, graph8, l8.chain(cc.DIM_FACE, ["f3", "f4"]))
print("  <X3 X4>  =", round(sv.pauli_expectation(flipped, syndrome_surface)))
