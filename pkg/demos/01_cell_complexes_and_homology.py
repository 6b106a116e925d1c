"""Cell complexes, boundary maps, and Z2 homology.

Walks through the geometric substrate: the elementary cubic cell, the
minimal 8-qubit lattice, and a carved lattice whose removed line of qubits
creates a loop that cannot be contracted.
"""

from tecsim import cellcomplex as cc

# The elementary cell: 1 volume, 6 faces, 12 edges, 8 sites.
cell = cc.build_elementary_cell()
print("elementary cell:", cell.counts())

# The boundary of one face is its 4 surrounding edges.
face = cell.chain(cc.DIM_FACE, ["f:z:0,0,0"])
print("boundary of one face:", len(cc.boundary(cell, face).support), "edges")

# The closed surface of the cube (all 6 faces) has no boundary: every edge
# is shared by exactly two faces and cancels mod 2.
surface = cc.Chain(cc.DIM_FACE, frozenset(cell.dim_cells(cc.DIM_FACE)))
print("6-face surface is a cycle:", cc.is_cycle(cell, surface))

# The 8-qubit demonstration lattice: four volumes around a carved center.
l8 = cc.build_l8()
print("\n8-qubit lattice:", l8.counts())
print("boundary of f1:", sorted(l8.label_of(c) for c in l8.cells[l8.id_of("f1")].boundary))
print("boundary of volume w:", sorted(l8.label_of(c) for c in l8.cells[l8.id_of("w")].boundary))

# Any two faces form a closed surface; those bounding a volume are trivial,
# while {f1, f1'} encloses the missing center and is not.
trivial = l8.chain(cc.DIM_FACE, ["f3", "f1"])
protected = l8.chain(cc.DIM_FACE, ["f1", "f1'"])
empty = cc.Chain(cc.DIM_FACE, frozenset())
print("f3+f1 bounds a volume:", cc.homologous(l8, trivial, empty))
print("f1+f1' is contractible:", cc.homologous(l8, protected, empty))

# Carving a line of qubits out of a 3x3x3 lattice: an edge loop around the
# removed column can no longer be contracted, exactly like a loop around a
# puncture in a plane.
defects = cc.line_defect(3, 3, 3, 1, 1)
carved = cc.build_cubic(3, 3, 3, defects=defects)
loop = cc.boundary(carved, cc.Chain(cc.DIM_FACE, frozenset({carved.id_of("f:z:1,1,1")})))
small = cc.boundary(carved, cc.Chain(cc.DIM_FACE, frozenset({carved.id_of("f:z:0,0,1")})))
print("\ncarved 3x3x3 lattice, removed qubits:", defects)
print("loop around the defect is a cycle:", cc.is_cycle(carved, loop))
print("loop around the defect is contractible:",
      cc.homologous(carved, loop, cc.Chain(cc.DIM_EDGE, frozenset())))
print("a small loop elsewhere is contractible:",
      cc.homologous(carved, small, cc.Chain(cc.DIM_EDGE, frozenset())))

# Complexes serialize to JSON and round-trip bit-exactly.
text = cc.to_json(l8)
assert cc.to_json(cc.from_json(text)) == text
print("\nJSON round-trip: exact,", len(text), "bytes")
