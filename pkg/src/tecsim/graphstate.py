"""Cluster-state interaction graphs and exact stabilizer-group correlations.

A cell complex induces an interaction graph: one qubit per retained face and
per retained edge, with a graph edge between face qubit i and edge qubit j
exactly when edge j lies on the boundary of face i.  The cluster state on
that graph is the joint +1 eigenstate of one generator per qubit,

    K_a = X_a (x) Z_b for every graph neighbor b of a,

and any Pauli product's expectation on the state is +1/-1 if (plus or minus)
the product lies in the generated group, else exactly 0.  Membership is a
GF(2) solve on binary symplectic rows; signs are accumulated exactly.

Qubit ordering convention: face qubits first (sorted by cell id), then edge
qubits (sorted by cell id).  Qubit k corresponds to bit k in all masks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .cellcomplex import CellComplex, Chain, DIM_EDGE, DIM_FACE
from .gf2 import Gf2Solver

FACE, EDGE = "face", "edge"


class RemovedQubitError(ValueError):
    """A cell referenced as a qubit carries no qubit (removed or excluded)."""


class PhaseError(ValueError):
    """An operator acquired an imaginary phase where only +/-1 is allowed."""


@dataclass(frozen=True)
class QubitRecord:
    qubit: int
    kind: str
    cell: int


@dataclass(frozen=True, eq=False)
class InteractionGraph:
    """Qubits (face/edge records) plus the face-edge incidence edges."""

    qubits: tuple[QubitRecord, ...]
    edges: frozenset[tuple[int, int]]
    cell_to_qubit: dict[int, int] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.qubits)

    def neighbors(self, qubit: int) -> tuple[int, ...]:
        out = []
        for a, b in self.edges:
            if a == qubit:
                out.append(b)
            elif b == qubit:
                out.append(a)
        return tuple(sorted(out))

    def kind_qubits(self, kind: str) -> tuple[int, ...]:
        return tuple(r.qubit for r in self.qubits if r.kind == kind)

    def qubit_cell(self, qubit: int) -> int:
        return self.qubits[qubit].cell


def graph_from_complex(cplx: CellComplex) -> InteractionGraph:
    """One qubit per retained face/edge; incidence edges from the boundary map."""
    face_cells = cplx.retained_cells(DIM_FACE)
    edge_cells = cplx.retained_cells(DIM_EDGE)
    records: list[QubitRecord] = []
    cell_to_qubit: dict[int, int] = {}
    for cell_id in face_cells:
        cell_to_qubit[cell_id] = len(records)
        records.append(QubitRecord(len(records), FACE, cell_id))
    for cell_id in edge_cells:
        cell_to_qubit[cell_id] = len(records)
        records.append(QubitRecord(len(records), EDGE, cell_id))
    pairs = set()
    for cell_id in face_cells:
        fq = cell_to_qubit[cell_id]
        for edge_cell in cplx.cells[cell_id].boundary:
            eq = cell_to_qubit[edge_cell]
            pairs.add((min(fq, eq), max(fq, eq)))
    return InteractionGraph(tuple(records), frozenset(pairs), cell_to_qubit)


# -- Pauli operators in binary symplectic form -----------------------------

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


@dataclass(frozen=True)
class PauliOp:
    """A signed Pauli product: phase i**phase times a tensor of I/X/Y/Z letters.

    ``x`` and ``z`` are bitmasks over qubits (bit k = qubit k); the letter on
    qubit k is read off (x_k, z_k).  Stabilizer arithmetic here only ever
    produces real phases; ``sign`` raises if an imaginary phase sneaks in.
    """

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0  # exponent of i, mod 4, in the letter convention

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("support mask exceeds qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(n)

    @classmethod
    def from_letters(cls, n: int, letters: dict[int, str], sign: int = 1) -> "PauliOp":
        x = z = 0
        for qubit, letter in letters.items():
            if not 0 <= qubit < n:
                raise ValueError(f"qubit {qubit} out of range")
            bx, bz = _LETTER_BITS[letter]
            x |= bx << qubit
            z |= bz << qubit
        return cls(n, x, z, 0 if sign == 1 else 2)

    @classmethod
    def x_on(cls, n: int, qubits: Iterable[int]) -> "PauliOp":
        return cls.from_letters(n, {q: "X" for q in qubits})

    @classmethod
    def z_on(cls, n: int, qubits: Iterable[int]) -> "PauliOp":
        return cls.from_letters(n, {q: "Z" for q in qubits})

    @classmethod
    def from_string(cls, text: str) -> "PauliOp":
        """Parse "XIZ..." with optional leading '-' (ASCII or U+2212)."""
        text = text.strip()
        sign = 1
        if text[:1] in ("-", "−"):
            sign = -1
            text = text[1:]
        elif text[:1] == "+":
            text = text[1:]
        letters = {}
        for idx, ch in enumerate(text):
            if ch not in _LETTER_BITS:
                raise ValueError(f"bad Pauli letter {ch!r}")
            if ch != "I":
                letters[idx] = ch
        return cls.from_letters(len(text), letters, sign)

    def __str__(self) -> str:
        body = "".join(self.letter(q) for q in range(self.n))
        return ("-" if self.sign < 0 else "") + body

    def letter(self, qubit: int) -> str:
        return _LETTERS[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        if self.phase == 0:
            return 1
        if self.phase == 2:
            return -1
        raise PhaseError(f"operator has imaginary phase i**{self.phase}")

    def commutes_with(self, other: "PauliOp") -> bool:
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        anti = (self.x & other.z).bit_count() + (self.z & other.x).bit_count()
        return anti % 2 == 0

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        # Convert letter phases to XZ normal form (each Y contributes one i),
        # reorder Z..X across the product (each overlap contributes -1), and
        # convert back.
        k = self.phase + (self.x & self.z).bit_count()
        k += other.phase + (other.x & other.z).bit_count()
        k += 2 * (self.z & other.x).bit_count()
        x = self.x ^ other.x
        z = self.z ^ other.z
        k -= (x & z).bit_count()
        return PauliOp(self.n, x, z, k % 4)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()


@dataclass(frozen=True, eq=False)
class StabilizerGroup:
    """Generators of a cluster-state stabilizer group (one K_a per qubit)."""

    generators: tuple[PauliOp, ...]

    def __post_init__(self):
        n = self.generators[0].n
        for g in self.generators:
            if g.n != n:
                raise ValueError("generators act on different qubit counts")
            g.sign  # noqa: B018 - raises PhaseError on imaginary phase
        if len(self.generators) != n:
            raise ValueError("generator count must equal qubit count")
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                if not a.commutes_with(b):
                    raise ValueError("generators must pairwise commute")

    @property
    def n(self) -> int:
        return self.generators[0].n

    _solver_cache: dict = field(default_factory=dict, repr=False)

    def _solver(self) -> Gf2Solver:
        solver = self._solver_cache.get("symplectic")
        if solver is None:
            rows = [(g.x << self.n) | g.z for g in self.generators]
            solver = Gf2Solver(rows)
            self._solver_cache["symplectic"] = solver
        return solver

    def member_sign(self, op: PauliOp) -> Optional[int]:
        """Sign s with s*(op's letters) in the group, or None if not a member."""
        if op.n != self.n:
            raise ValueError("operator qubit count does not match group")
        combo = self._solver().solve((op.x << self.n) | op.z)
        if combo is None:
            return None
        product = PauliOp.identity(self.n)
        for i in range(self.n):
            if (combo >> i) & 1:
                product = product * self.generators[i]
        assert product.x == op.x and product.z == op.z
        return product.sign

    def element(self, mask: int) -> PauliOp:
        """Product of the generators selected by ``mask`` bits."""
        product = PauliOp.identity(self.n)
        for i in range(self.n):
            if (mask >> i) & 1:
                product = product * self.generators[i]
        return product


def stabilizer_generators(graph: InteractionGraph) -> StabilizerGroup:
    """One generator per qubit: X there, Z on every interaction-graph neighbor."""
    neighbor_sets: list[set[int]] = [set() for _ in range(graph.n)]
    for a, b in graph.edges:
        neighbor_sets[a].add(b)
        neighbor_sets[b].add(a)
    gens = []
    for q in range(graph.n):
        letters = {q: "X"}
        letters.update({b: "Z" for b in neighbor_sets[q]})
        gens.append(PauliOp.from_letters(graph.n, letters))
    return StabilizerGroup(tuple(gens))


def correlation(group: StabilizerGroup, op: PauliOp) -> int:
    """Exact expectation of a Pauli product on the stabilized state: +1, -1 or 0."""
    if not op.is_hermitian:
        raise PhaseError("expectation of a non-Hermitian Pauli operator")
    member = group.member_sign(op)
    if member is None:
        return 0
    return member * op.sign


def surface_operator(cplx: CellComplex, graph: InteractionGraph, f: Chain) -> PauliOp:
    """Tensor product of X over the face qubits of a 2-chain, sign +1."""
    if f.dim != DIM_FACE:
        raise ValueError("surface operators are built from 2-chains of faces")
    cplx._check_chain(f)
    qubits = []
    for cell_id in f.support:
        qubit = graph.cell_to_qubit.get(cell_id)
        if qubit is None:
            raise RemovedQubitError(f"face cell {cell_id} carries no qubit")
        qubits.append(qubit)
    return PauliOp.x_on(graph.n, qubits)


def z_surface_operator(cplx: CellComplex, graph: InteractionGraph, f: Chain) -> PauliOp:
    """Lab-frame companion of :func:`surface_operator`: Z over the face qubits."""
    op = surface_operator(cplx, graph, f)
    return PauliOp(op.n, 0, op.x, 0)
