"""Z2 cell complexes for topological error correction.

A 3D cell complex is a set of volumes (dim 3), faces (dim 2), edges (dim 1)
and sites (dim 0) together with a mod-2 boundary map: the boundary of a
volume is the set of its surrounding faces, the boundary of a face the set
of its surrounding edges, and the boundary of an edge its two endpoints.
Chains are mod-2 formal sums (sets) of same-dimension cells; error patterns,
correction surfaces and syndromes all live here.

Conventions:
  * Cell ids are dense integers assigned deterministically (sorted by
    (dim, construction key)), so serialization and fixtures are stable.
  * Cubic lattices use open boundaries by default: boundary faces/edges are
    retained as cells and the exterior is not a cell.  Periodic axes are
    available for closed (boundaryless) lattices.
  * Carving removes qubit cells (faces/edges) as metadata.  The retained
    subcomplex drops removed cells, faces missing a boundary edge, and
    volumes missing a boundary face; homology queries run against it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .gf2 import Gf2Solver

DIM_SITE, DIM_EDGE, DIM_FACE, DIM_VOLUME = 0, 1, 2, 3


class ComplexError(ValueError):
    """Malformed complex construction input."""


class InvalidChainError(ValueError):
    """Chain refers to unknown/removed cells or cells of the wrong dimension."""


class DimensionError(ValueError):
    """Operation applied at an unsupported chain dimension."""


class DefectError(ValueError):
    """Defect specification references a cell that does not exist or cannot be removed."""


@dataclass(frozen=True)
class Cell:
    """One cell: id, dimension, boundary (ids one dimension down), label."""

    id: int
    dim: int
    boundary: frozenset[int]
    label: Optional[str] = None


@dataclass(frozen=True)
class Chain:
    """Mod-2 formal sum of cells of one dimension."""

    dim: int
    support: frozenset[int]

    def __xor__(self, other: "Chain") -> "Chain":
        if self.dim != other.dim:
            raise DimensionError(f"cannot add a {self.dim}-chain and a {other.dim}-chain")
        return Chain(self.dim, self.support ^ other.support)

    def __bool__(self) -> bool:
        return bool(self.support)


class CellComplex:
    """Immutable cell complex with Z2 boundary structure and removal metadata.

    Use the ``build_*`` constructors below; direct construction validates
    the boundary structure (unique ids, references one dimension down,
    boundary-of-boundary empty).
    """

    def __init__(
        self,
        cells: Iterable[Cell],
        removed: Iterable[int] = (),
        meta: Optional[Mapping[str, str]] = None,
    ):
        cell_list = sorted(cells, key=lambda c: c.id)
        self.cells: dict[int, Cell] = {}
        for cell in cell_list:
            if cell.id in self.cells:
                raise ComplexError(f"duplicate cell id {cell.id}")
            if cell.dim not in (0, 1, 2, 3):
                raise ComplexError(f"cell {cell.id} has unsupported dimension {cell.dim}")
            self.cells[cell.id] = cell

        self.by_dim: tuple[tuple[int, ...], ...] = tuple(
            tuple(c.id for c in cell_list if c.dim == d) for d in range(4)
        )
        self.labels: dict[str, int] = {}
        for cell in cell_list:
            if cell.label is not None:
                if cell.label in self.labels:
                    raise ComplexError(f"duplicate cell label {cell.label!r}")
                self.labels[cell.label] = cell.id

        self._validate_boundaries()

        removed_set = frozenset(removed)
        for cid in removed_set:
            if cid not in self.cells:
                raise DefectError(f"removed cell id {cid} does not exist")
            if self.cells[cid].dim not in (DIM_EDGE, DIM_FACE):
                raise DefectError(f"cell {cid} is not a qubit cell (face or edge)")
        self.removed: frozenset[int] = removed_set
        self.retained: frozenset[int] = self._compute_retained()
        self.meta: dict[str, str] = dict(meta or {})
        self._homology_solvers: dict[int, tuple[Gf2Solver, dict[int, int]]] = {}

    # -- validation -----------------------------------------------------

    def _validate_boundaries(self) -> None:
        for cell in self.cells.values():
            if cell.dim == 0:
                if cell.boundary:
                    raise ComplexError(f"site {cell.id} has a nonempty boundary")
                continue
            if not cell.boundary:
                raise ComplexError(f"{cell.dim}-cell {cell.id} has an empty boundary")
            for bid in cell.boundary:
                ref = self.cells.get(bid)
                if ref is None:
                    raise ComplexError(f"cell {cell.id} references missing cell {bid}")
                if ref.dim != cell.dim - 1:
                    raise ComplexError(
                        f"cell {cell.id} (dim {cell.dim}) references cell {bid} of dim {ref.dim}"
                    )
            if cell.dim >= 2:
                acc: set[int] = set()
                for bid in cell.boundary:
                    acc ^= self.cells[bid].boundary
                if acc:
                    raise ComplexError(f"boundary-of-boundary of cell {cell.id} is nonempty")

    def _compute_retained(self) -> frozenset[int]:
        retained: set[int] = set()
        for cid in self.by_dim[DIM_SITE]:
            retained.add(cid)
        for cid in self.by_dim[DIM_EDGE]:
            if cid not in self.removed:
                retained.add(cid)
        for cid in self.by_dim[DIM_FACE]:
            cell = self.cells[cid]
            if cid not in self.removed and all(b in retained for b in cell.boundary):
                retained.add(cid)
        for cid in self.by_dim[DIM_VOLUME]:
            cell = self.cells[cid]
            if all(b in retained for b in cell.boundary):
                retained.add(cid)
        return frozenset(retained)

    # -- lookups --------------------------------------------------------

    def cell(self, cid: int) -> Cell:
        return self.cells[cid]

    def id_of(self, label: str) -> int:
        try:
            return self.labels[label]
        except KeyError:
            raise KeyError(f"no cell labeled {label!r}") from None

    def label_of(self, cid: int) -> Optional[str]:
        return self.cells[cid].label

    def dim_cells(self, dim: int) -> tuple[int, ...]:
        return self.by_dim[dim]

    def retained_cells(self, dim: int) -> tuple[int, ...]:
        return tuple(cid for cid in self.by_dim[dim] if cid in self.retained)

    def counts(self) -> dict[str, int]:
        return {
            "sites": len(self.by_dim[0]),
            "edges": len(self.by_dim[1]),
            "faces": len(self.by_dim[2]),
            "volumes": len(self.by_dim[3]),
        }

    def chain(self, dim: int, cells: Iterable[int | str]) -> Chain:
        """Build a chain from cell ids and/or labels, validating dimensions."""
        ids = set()
        for ref in cells:
            cid = self.id_of(ref) if isinstance(ref, str) else ref
            cell = self.cells.get(cid)
            if cell is None:
                raise InvalidChainError(f"unknown cell id {cid}")
            if cell.dim != dim:
                raise InvalidChainError(f"cell {cid} has dim {cell.dim}, expected {dim}")
            ids.symmetric_difference_update({cid})
        return Chain(dim, frozenset(ids))

    def _check_chain(self, c: Chain, retained_only: bool = False) -> None:
        for cid in c.support:
            cell = self.cells.get(cid)
            if cell is None:
                raise InvalidChainError(f"unknown cell id {cid}")
            if cell.dim != c.dim:
                raise InvalidChainError(f"cell {cid} has dim {cell.dim}, chain has dim {c.dim}")
            if retained_only and cid not in self.retained:
                raise InvalidChainError(f"cell {cid} is removed from the complex")


# -- boundary map and homology ------------------------------------------


def boundary(cplx: CellComplex, c: Chain) -> Chain:
    """Mod-2 boundary of a chain: symmetric difference of cell boundaries."""
    if c.dim == 0:
        raise DimensionError("0-chains have no boundary")
    cplx._check_chain(c)
    acc: set[int] = set()
    for cid in c.support:
        acc ^= cplx.cells[cid].boundary
    return Chain(c.dim - 1, frozenset(acc))


def is_cycle(cplx: CellComplex, c: Chain) -> bool:
    """True iff the chain has empty boundary."""
    return not boundary(cplx, c).support


def _homology_solver(cplx: CellComplex, dim: int) -> tuple[Gf2Solver, dict[int, int]]:
    """Solver over boundaries of retained (dim+1)-cells, bit-indexed by retained dim-cells."""
    cached = cplx._homology_solvers.get(dim)
    if cached is not None:
        return cached
    positions = {cid: i for i, cid in enumerate(cplx.retained_cells(dim))}
    rows = []
    for cid in cplx.retained_cells(dim + 1):
        bits = 0
        for bid in cplx.cells[cid].boundary:
            bits |= 1 << positions[bid]
        rows.append(bits)
    solver = (Gf2Solver(rows), positions)
    cplx._homology_solvers[dim] = solver
    return solver


def homologous(cplx: CellComplex, f1: Chain, f2: Chain) -> bool:
    """True iff two cycles differ by a boundary of (dim+1)-chains.

    Decided exactly by GF(2) elimination over the boundary matrix of the
    retained subcomplex, so carved defects change the answer.
    """
    if f1.dim != f2.dim:
        raise DimensionError("cycles must have equal dimension")
    if f1.dim >= 3:
        raise DimensionError("no higher-dimensional cells to bound a 3-chain")
    cplx._check_chain(f1, retained_only=True)
    cplx._check_chain(f2, retained_only=True)
    if not is_cycle(cplx, f1) or not is_cycle(cplx, f2):
        raise InvalidChainError("homologous() requires cycles (empty boundary)")
    solver, positions = _homology_solver(cplx, f1.dim)
    target = 0
    for cid in f1.support ^ f2.support:
        target |= 1 << positions[cid]
    return solver.contains(target)


# -- builders -----------------------------------------------------------


def _assign_ids(groups: Sequence[Sequence[tuple[object, str, Sequence[object]]]]) -> CellComplex:
    """Assign dense ids per dimension from (key, label, boundary-keys) rows."""
    key_to_id: dict[object, int] = {}
    next_id = 0
    cells: list[Cell] = []
    for dim, group in enumerate(groups):
        for key, label, _ in sorted(group, key=lambda row: row[0]):
            key_to_id[(dim, key)] = next_id
            next_id += 1
    for dim, group in enumerate(groups):
        for key, label, bkeys in group:
            bids = frozenset(key_to_id[(dim - 1, bk)] for bk in bkeys)
            cells.append(Cell(key_to_id[(dim, key)], dim, bids, label))
    return CellComplex(cells)


def build_elementary_cell() -> CellComplex:
    """The single lattice cell: 1 volume, 6 faces, 12 edges, 8 sites.

    Built from explicit literal tables (not the cubic generator) so the two
    constructions cross-check each other.
    """
    sites = [((x, y, z), f"s:{x},{y},{z}", ()) for x in (0, 1) for y in (0, 1) for z in (0, 1)]

    def edge(axis: str, x: int, y: int, z: int):
        dx, dy, dz = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}[axis]
        return (
            (axis, x, y, z),
            f"e:{axis}:{x},{y},{z}",
            ((x, y, z), (x + dx, y + dy, z + dz)),
        )

    edges = [
        edge("x", 0, 0, 0), edge("x", 0, 1, 0), edge("x", 0, 0, 1), edge("x", 0, 1, 1),
        edge("y", 0, 0, 0), edge("y", 1, 0, 0), edge("y", 0, 0, 1), edge("y", 1, 0, 1),
        edge("z", 0, 0, 0), edge("z", 1, 0, 0), edge("z", 0, 1, 0), edge("z", 1, 1, 0),
    ]

    # Faces keyed by normal axis; each lists its 4 surrounding edge keys.
    faces = [
        (("x", 0, 0, 0), "f:x:0,0,0", (("y", 0, 0, 0), ("y", 0, 0, 1), ("z", 0, 0, 0), ("z", 0, 1, 0))),
        (("x", 1, 0, 0), "f:x:1,0,0", (("y", 1, 0, 0), ("y", 1, 0, 1), ("z", 1, 0, 0), ("z", 1, 1, 0))),
        (("y", 0, 0, 0), "f:y:0,0,0", (("x", 0, 0, 0), ("x", 0, 0, 1), ("z", 0, 0, 0), ("z", 1, 0, 0))),
        (("y", 0, 1, 0), "f:y:0,1,0", (("x", 0, 1, 0), ("x", 0, 1, 1), ("z", 0, 1, 0), ("z", 1, 1, 0))),
        (("z", 0, 0, 0), "f:z:0,0,0", (("x", 0, 0, 0), ("x", 0, 1, 0), ("y", 0, 0, 0), ("y", 1, 0, 0))),
        (("z", 0, 0, 1), "f:z:0,0,1", (("x", 0, 0, 1), ("x", 0, 1, 1), ("y", 0, 0, 1), ("y", 1, 0, 1))),
    ]
    volumes = [((0, 0, 0), "v:0,0,0", tuple(f[0] for f in faces))]
    cplx = _assign_ids([sites, edges, faces, volumes])
    cplx.meta["lattice"] = "elementary"
    return cplx


def build_l8() -> CellComplex:
    """The minimal 8-qubit demonstration lattice.

    Four cube volumes arranged around a carved-out center: volumes v, w, y, z;
    faces f1, f3, f4, f1', f3', f4' all sharing the boundary {e2, e2'}; edges
    e2, e2' running between the two sites s and t.  The center volume and the
    exterior are not cells, which is what makes the face pair {f1, f1'} a
    homologically nontrivial closed surface.
    """
    sites = [("s", "s", ()), ("t", "t", ())]
    edges = [("e2", "e2", ("s", "t")), ("e2'", "e2'", ("s", "t"))]
    face_names = ["f1", "f3", "f4", "f1'", "f3'", "f4'"]
    faces = [(name, name, ("e2", "e2'")) for name in face_names]
    volumes = [
        ("v", "v", ("f4", "f3")),
        ("w", "w", ("f3", "f1")),
        ("y", "y", ("f1'", "f3'")),
        ("z", "z", ("f3'", "f4'")),
    ]
    cells: list[Cell] = []
    next_id = 0
    key_to_id: dict[tuple[int, str], int] = {}
    for dim, group in enumerate([sites, edges, faces, volumes]):
        for key, _, _ in group:
            key_to_id[(dim, key)] = next_id
            next_id += 1
    for dim, group in enumerate([sites, edges, faces, volumes]):
        for key, label, bkeys in group:
            bids = frozenset(key_to_id[(dim - 1, bk)] for bk in bkeys)
            cells.append(Cell(key_to_id[(dim, key)], dim, bids, label))
    cplx = CellComplex(cells)
    cplx.meta["lattice"] = "l8"
    return cplx


_AXES = ("x", "y", "z")
_UNIT = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}


def _normalize_periodic(periodic: bool | Sequence[bool]) -> tuple[bool, bool, bool]:
    if isinstance(periodic, bool):
        return (periodic, periodic, periodic)
    px, py, pz = periodic
    return (bool(px), bool(py), bool(pz))


def build_cubic(
    lx: int,
    ly: int,
    t: int,
    defects: Iterable[int | str] = (),
    periodic: bool | Sequence[bool] = False,
) -> CellComplex:
    """An lx x ly x t lattice of cubic cells.

    Open boundaries by default: boundary faces and edges are retained as
    cells and the exterior is not a cell.  Axes flagged periodic wrap
    around (requiring extent >= 2), which yields a closed complex with
    nontrivial 2-cycles such as full cross sections.

    ``defects`` lists face/edge qubit cells to mark removed, as labels
    (e.g. ``"f:z:1,1,0"``) or cell ids.  Removal is metadata: cells stay in
    the complex, and retained-subcomplex queries exclude them.
    """
    if lx < 1 or ly < 1 or t < 1:
        raise ComplexError("lattice dimensions must be >= 1")
    per = _normalize_periodic(periodic)
    dims = (lx, ly, t)
    for extent, p, axis in zip(dims, per, _AXES):
        if p and extent < 2:
            raise ComplexError(f"periodic axis {axis} needs extent >= 2")

    def site_range(axis_idx: int) -> range:
        return range(dims[axis_idx]) if per[axis_idx] else range(dims[axis_idx] + 1)

    def wrap(coord: tuple[int, int, int]) -> tuple[int, int, int]:
        return tuple(
            c % dims[i] if per[i] else c for i, c in enumerate(coord)
        )  # type: ignore[return-value]

    sites = [
        ((x, y, z), f"s:{x},{y},{z}", ())
        for x in site_range(0)
        for y in site_range(1)
        for z in site_range(2)
    ]

    edges = []
    for axis_idx, axis in enumerate(_AXES):
        unit = _UNIT[axis]
        pos_ranges = [
            range(dims[i]) if (i == axis_idx or per[i]) else range(dims[i] + 1) for i in range(3)
        ]
        for x in pos_ranges[0]:
            for y in pos_ranges[1]:
                for z in pos_ranges[2]:
                    a = (x, y, z)
                    b = wrap((x + unit[0], y + unit[1], z + unit[2]))
                    edges.append(((axis, x, y, z), f"e:{axis}:{x},{y},{z}", (a, b)))

    faces = []
    for axis_idx, axis in enumerate(_AXES):
        # Face normal to `axis`, spanned by the other two axes.
        u_idx, v_idx = [i for i in range(3) if i != axis_idx]
        u_axis, v_axis = _AXES[u_idx], _AXES[v_idx]
        u_unit, v_unit = _UNIT[u_axis], _UNIT[v_axis]
        pos_ranges = [
            range(dims[i]) if (i != axis_idx or per[i]) else range(dims[i] + 1) for i in range(3)
        ]
        for x in pos_ranges[0]:
            for y in pos_ranges[1]:
                for z in pos_ranges[2]:
                    base = (x, y, z)
                    shifted_u = wrap((x + u_unit[0], y + u_unit[1], z + u_unit[2]))
                    shifted_v = wrap((x + v_unit[0], y + v_unit[1], z + v_unit[2]))
                    boundary_keys = (
                        (u_axis,) + base,
                        (u_axis,) + shifted_v,
                        (v_axis,) + base,
                        (v_axis,) + shifted_u,
                    )
                    faces.append(((axis, x, y, z), f"f:{axis}:{x},{y},{z}", boundary_keys))

    volumes = []
    for x in range(lx):
        for y in range(ly):
            for z in range(t):
                base = (x, y, z)
                boundary_keys = []
                for axis in _AXES:
                    unit = _UNIT[axis]
                    far = wrap((x + unit[0], y + unit[1], z + unit[2]))
                    boundary_keys.append((axis,) + base)
                    boundary_keys.append((axis, far[0], far[1], far[2]))
                volumes.append((base, f"v:{x},{y},{z}", tuple(boundary_keys)))

    cplx = _assign_ids([sites, edges, faces, volumes])
    cplx.meta["lattice"] = "cubic"
    cplx.meta["dims"] = f"{lx},{ly},{t}"
    cplx.meta["periodic"] = ",".join(a for a, p in zip(_AXES, per) if p) or "none"
    cplx.meta["boundary_convention"] = (
        "open boundaries retain boundary faces/edges; the exterior is not a cell"
    )

    if defects:
        removed = []
        for spec in defects:
            try:
                cid = cplx.id_of(spec) if isinstance(spec, str) else int(spec)
            except KeyError as exc:
                raise DefectError(str(exc)) from None
            if cid not in cplx.cells:
                raise DefectError(f"defect cell id {cid} out of range")
            removed.append(cid)
        cplx = CellComplex(cplx.cells.values(), removed=removed, meta=cplx.meta)
    return cplx


def line_defect(lx: int, ly: int, t: int, x: int, y: int) -> list[str]:
    """Face-qubit labels for a straight removed line along the t axis.

    Removes the t-normal faces of cell column (x, y), i.e. exactly the faces
    a vertical line through that column would puncture.
    """
    if not (0 <= x < lx and 0 <= y < ly):
        raise DefectError(f"defect column ({x},{y}) outside {lx}x{ly} base")
    return [f"f:z:{x},{y},{z}" for z in range(t + 1)]


def cross_section(cplx: CellComplex, axis: str, coord: int) -> Chain:
    """2-chain of all faces normal to ``axis`` at position ``coord``.

    On an axis-periodic lattice this is a cycle (a wrapping closed surface),
    the natural protected surface for memory experiments.
    """
    if axis not in _AXES:
        raise DimensionError(f"unknown axis {axis!r}")
    prefix = f"f:{axis}:"
    axis_idx = _AXES.index(axis)
    ids = []
    for label, cid in cplx.labels.items():
        if label.startswith(prefix):
            pos = tuple(int(v) for v in label[len(prefix):].split(","))
            if pos[axis_idx] == coord:
                ids.append(cid)
    if not ids:
        raise InvalidChainError(f"no {axis}-normal faces at coordinate {coord}")
    return Chain(DIM_FACE, frozenset(ids))


# -- serialization --------------------------------------------------------


def to_json(cplx: CellComplex) -> str:
    """Canonical JSON form; round-trips bit-exactly through from_json."""
    payload = {
        "meta": {k: cplx.meta[k] for k in sorted(cplx.meta)},
        "cells": [
            {
                "id": cell.id,
                "dim": cell.dim,
                "boundary": sorted(cell.boundary),
                **({"label": cell.label} if cell.label is not None else {}),
            }
            for cell in sorted(cplx.cells.values(), key=lambda c: c.id)
        ],
        "removed": sorted(cplx.removed),
    }
    return json.dumps(payload, indent=1, ensure_ascii=False) + "\n"


def from_json(text: str) -> CellComplex:
    payload = json.loads(text)
    cells = [
        Cell(row["id"], row["dim"], frozenset(row["boundary"]), row.get("label"))
        for row in payload["cells"]
    ]
    return CellComplex(cells, removed=payload.get("removed", ()), meta=payload.get("meta"))


def save(cplx: CellComplex, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(cplx))


def load(path: str) -> CellComplex:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json(fh.read())
