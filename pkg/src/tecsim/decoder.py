"""Syndrome extraction and decoding for cluster-state error correction.

Errors are abstract-frame Z flips on qubits; the syndrome is one parity bit
per retained volume (the product of X outcomes over the faces bounding it),
-1 signalling an error endpoint inside that cell.  Corrections are applied
to classical measurement outcomes only, never to any simulated state.

Two decoders:
  * an exact per-side lookup for the 8-qubit demonstration lattice, where
    the four volume bits locate any single face-qubit error, and
  * minimum-weight matching on cubic lattices, pairing -1 volumes (and, on
    open lattices, the boundary acting as a free terminal) along shortest
    paths of the volume-adjacency graph; the correction is the set of faces
    those paths cross.

Matching is exact (bitmask dynamic program) up to EXACT_MATCH_LIMIT defects
and falls back to greedy pairing with local improvement above that; the
returned correction carries an ``exact`` flag.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .cellcomplex import CellComplex, Chain, DIM_FACE, DIM_VOLUME, is_cycle
from .graphstate import EDGE, InteractionGraph
from .noise import ErrorPattern

EXACT_MATCH_LIMIT = 12
_DECODE_CACHE_LIMIT = 200_000


class InvalidSyndromeError(ValueError):
    """Syndrome cannot be decoded (wrong volumes, or odd parity with no boundary)."""


@dataclass(frozen=True)
class Syndrome:
    """One +/-1 bit per retained volume of the host complex."""

    bits: Mapping[int, int]

    @property
    def defects(self) -> tuple[int, ...]:
        return tuple(sorted(v for v, bit in self.bits.items() if bit == -1))

    def is_clear(self) -> bool:
        return not self.defects


@dataclass(frozen=True)
class Correction:
    """Classical sign-flip corrections, as a set of qubit ids."""

    flipped: frozenset[int]
    exact: bool = True


@dataclass(frozen=True)
class DecodeReport:
    syndrome: Syndrome
    correction: Correction
    residual: ErrorPattern
    success: bool
    detected_uncorrectable: bool


def extract_syndrome(cplx: CellComplex, graph: InteractionGraph, e: ErrorPattern) -> Syndrome:
    """Per-volume parity bits: (-1)**|e intersect face qubits of the volume boundary|."""
    error_cells = {graph.qubit_cell(q) for q in e.flipped}
    bits = {}
    for vid in cplx.retained_cells(DIM_VOLUME):
        overlap = len(error_cells & cplx.cells[vid].boundary)
        bits[vid] = -1 if overlap % 2 else 1
    return Syndrome(bits)


def dual_parity(graph: InteractionGraph, e: ErrorPattern) -> int:
    """Parity of the X product over all edge qubits: the one dual syndrome bit.

    The product of X over every edge qubit is a stabilizer element, so an
    odd number of edge-qubit errors flips it to -1: detected, but a single
    bit cannot locate which edge qubit was hit.
    """
    edge_qubits = set(graph.kind_qubits(EDGE))
    return -1 if len(edge_qubits & e.flipped) % 2 else 1


# -- exact lookup for the 8-qubit demonstration lattice ---------------------

# Per-side decoding table: (first volume bit, second volume bit) -> face label
# to flip.  First/second volume bit for the unprimed side are the boundaries
# {f3,f1} and {f4,f3}; an error on f1 flips only the first, on f3 both, on
# f4 only the second.
_SIDE_TABLE = {
    (-1, 1): 0,   # first face of the side
    (-1, -1): 1,  # middle face
    (1, -1): 2,   # last face
    (1, 1): None,
}
_L8_SIDES = (
    (("w", "v"), ("f1", "f3", "f4")),
    (("y", "z"), ("f1'", "f3'", "f4'")),
)


def decode_lookup_l8(
    cplx: CellComplex,
    graph: InteractionGraph,
    s: Syndrome,
    dual: int = 1,
) -> Correction:
    """Table decoding on the 8-qubit lattice: minimal per-side correction.

    ``dual`` is the parity of the edge-qubit X product; -1 marks a detected
    but unlocatable edge-qubit error (reported via the decode report flag,
    face decoding continues regardless).
    """
    expected_volumes = set(cplx.retained_cells(DIM_VOLUME))
    if set(s.bits) != expected_volumes:
        raise InvalidSyndromeError("syndrome must carry exactly the four volume bits")
    if dual not in (1, -1):
        raise InvalidSyndromeError(f"dual bit must be +1 or -1, got {dual}")
    flipped = set()
    for volume_labels, face_labels in _L8_SIDES:
        key = tuple(s.bits[cplx.id_of(label)] for label in volume_labels)
        choice = _SIDE_TABLE[key]
        if choice is not None:
            flipped.add(graph.cell_to_qubit[cplx.id_of(face_labels[choice])])
    return Correction(frozenset(flipped))


# -- minimum-weight matching on cubic lattices -------------------------------


class CubicMatcher:
    """Precomputed shortest-path structure for matching on one lattice.

    Vertices are retained volumes; two volumes are adjacent iff they share a
    retained face qubit.  Faces with exactly one incident retained volume
    connect it to the boundary terminal (present on open or carved lattices).
    All-pairs BFS distances and parent trees are built once; decoding a
    syndrome is then a matter of table lookups plus a small matching.
    """

    def __init__(self, cplx: CellComplex, graph: InteractionGraph):
        self.cplx = cplx
        self.graph = graph
        self.volumes: tuple[int, ...] = cplx.retained_cells(DIM_VOLUME)
        self.vol_index = {vid: i for i, vid in enumerate(self.volumes)}
        nv = len(self.volumes)

        # face qubit -> incident retained volumes
        incident: dict[int, list[int]] = {}
        for vid in self.volumes:
            for face_cell in cplx.cells[vid].boundary:
                qubit = graph.cell_to_qubit.get(face_cell)
                if qubit is None:
                    continue
                incident.setdefault(qubit, []).append(self.vol_index[vid])

        self.face_incidence: dict[int, tuple[int, ...]] = {
            qubit: tuple(vols) for qubit, vols in sorted(incident.items())
        }
        self.adjacency: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
        boundary_links: list[list[int]] = [[] for _ in range(nv)]
        for qubit, vols in sorted(incident.items()):
            if len(vols) == 2:
                a, b = vols
                self.adjacency[a].append((b, qubit))
                self.adjacency[b].append((a, qubit))
            elif len(vols) == 1:
                boundary_links[vols[0]].append(qubit)
        for neighbors in self.adjacency:
            neighbors.sort()

        self.has_boundary = any(boundary_links[v] for v in range(nv))

        self.dist = np.full((nv, nv), -1, dtype=np.int32)
        self.prev_vol = np.full((nv, nv), -1, dtype=np.int32)
        self.prev_face = np.full((nv, nv), -1, dtype=np.int32)
        for src in range(nv):
            self._bfs_from(src)

        # Distance to boundary plus first hop toward it, via multi-source BFS.
        self.bdist = np.full(nv, -1, dtype=np.int64)
        self.bnext_vol = np.full(nv, -1, dtype=np.int32)
        self.bnext_face = np.full(nv, -1, dtype=np.int32)
        frontier = []
        for v in range(nv):
            if boundary_links[v]:
                self.bdist[v] = 1
                self.bnext_vol[v] = -1
                self.bnext_face[v] = min(boundary_links[v])
                frontier.append(v)
        while frontier:
            nxt = []
            for v in frontier:
                for w, face in self.adjacency[v]:
                    if self.bdist[w] == -1:
                        self.bdist[w] = self.bdist[v] + 1
                        self.bnext_vol[w] = v
                        self.bnext_face[w] = face
                        nxt.append(w)
            frontier = nxt
        if not self.has_boundary:
            self.bdist[:] = np.iinfo(np.int64).max // 4

        # Plain nested lists for the decode hot path (numpy scalar indexing
        # is an order of magnitude slower per lookup).
        self._dist = self.dist.tolist()
        self._bdist = self.bdist.tolist()
        self._prev_vol = self.prev_vol.tolist()
        self._prev_face = self.prev_face.tolist()
        self._bnext_vol = self.bnext_vol.tolist()
        self._bnext_face = self.bnext_face.tolist()
        self._decode_cache: dict[tuple[int, ...], Correction] = {}

    def _bfs_from(self, src: int) -> None:
        self.dist[src, src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for v in frontier:
                for w, face in self.adjacency[v]:
                    if self.dist[src, w] == -1:
                        self.dist[src, w] = self.dist[src, v] + 1
                        self.prev_vol[src, w] = v
                        self.prev_face[src, w] = face
                        nxt.append(w)
            frontier = nxt

    def pair_path(self, a: int, b: int) -> list[int]:
        """Face qubits along the shortest path between volume indices a and b."""
        prev_vol, prev_face = self._prev_vol[a], self._prev_face[a]
        faces = []
        v = b
        while v != a:
            faces.append(prev_face[v])
            v = prev_vol[v]
        return faces

    def boundary_path(self, v: int) -> list[int]:
        """Face qubits along the shortest path from volume index v to the boundary."""
        faces = []
        while True:
            faces.append(self._bnext_face[v])
            nxt = self._bnext_vol[v]
            if nxt == -1:
                return faces
            v = nxt

    # -- matching ------------------------------------------------------

    def match(self, defect_indices: Sequence[int]) -> tuple[list[tuple[int, int]], list[int], bool]:
        """Pair defects (and boundary) minimizing total hop count.

        Returns (volume pairs, boundary-matched volumes, exact flag); ties
        broken lexicographically by (defect position, partner position).
        """
        k = len(defect_indices)
        if k == 0:
            return [], [], True
        if not self.has_boundary and k % 2:
            raise InvalidSyndromeError("odd defect parity in a closed complex")
        if k == 1:
            return [], [defect_indices[0]], True
        if k == 2:
            a, b = defect_indices
            direct = self._dist[a][b]
            if self.has_boundary and self._bdist[a] + self._bdist[b] <= direct:
                return [], [a, b], True
            return [(a, b)], [], True
        if k <= EXACT_MATCH_LIMIT:
            return self._match_exact(defect_indices)
        return self._match_greedy(defect_indices)

    def _match_exact(self, defects: Sequence[int]) -> tuple[list[tuple[int, int]], list[int], bool]:
        k = len(defects)
        dist = self._dist
        pair_cost = [[dist[defects[i]][defects[j]] for j in range(k)] for i in range(k)]
        bound_cost = [self._bdist[defects[i]] for i in range(k)]
        full = (1 << k) - 1
        boundary = self.has_boundary
        # cost to match everything outside ``mask``; memoized on reachable
        # states only (the lowest unmatched defect is always handled next).
        best_cost: dict[int, float] = {full: 0.0}
        best_move: dict[int, tuple[int, int]] = {}

        def solve(mask: int) -> float:
            cached = best_cost.get(mask)
            if cached is not None:
                return cached
            i = ((~mask) & (mask + 1)).bit_length() - 1  # lowest unset bit
            bit_i = 1 << i
            best = float("inf")
            chosen = (i, -1)
            if boundary:
                best = bound_cost[i] + solve(mask | bit_i)
            row = pair_cost[i]
            for j in range(i + 1, k):
                bit_j = 1 << j
                if mask & bit_j:
                    continue
                candidate = row[j] + solve(mask | bit_i | bit_j)
                if candidate < best:
                    best, chosen = candidate, (i, j)
            best_cost[mask] = best
            best_move[mask] = chosen
            return best

        solve(0)
        pairs: list[tuple[int, int]] = []
        to_boundary: list[int] = []
        mask = 0
        while mask != full:
            i, j = best_move[mask]
            if j == -1:
                to_boundary.append(defects[i])
                mask |= 1 << i
            else:
                pairs.append((defects[i], defects[j]))
                mask |= (1 << i) | (1 << j)
        return pairs, to_boundary, True

    def _match_greedy(self, defects: Sequence[int]) -> tuple[list[tuple[int, int]], list[int], bool]:
        remaining = list(defects)
        pairs: list[tuple[int, int]] = []
        to_boundary: list[int] = []
        while remaining:
            best = None
            for ai, a in enumerate(remaining):
                if self.has_boundary:
                    cand = (self._bdist[a], ai, -1)
                    if best is None or cand < best:
                        best = cand
                for bi in range(ai + 1, len(remaining)):
                    cand = (self._dist[a][remaining[bi]], ai, bi)
                    if best is None or cand < best:
                        best = cand
            assert best is not None
            _, ai, bi = best
            if bi == -1:
                to_boundary.append(remaining.pop(ai))
            else:
                b = remaining.pop(bi)
                a = remaining.pop(ai)
                pairs.append((a, b))
        self._improve_pairs(pairs)
        return pairs, to_boundary, False

    def _improve_pairs(self, pairs: list[tuple[int, int]]) -> None:
        """2-opt passes: reconnect pair endpoints while it lowers total cost."""
        dist = self._dist
        improved = True
        while improved:
            improved = False
            for i, j in itertools.combinations(range(len(pairs)), 2):
                a, b = pairs[i]
                c, d = pairs[j]
                current = dist[a][b] + dist[c][d]
                if dist[a][c] + dist[b][d] < current:
                    pairs[i], pairs[j] = (a, c), (b, d)
                    improved = True
                elif dist[a][d] + dist[b][c] < current:
                    pairs[i], pairs[j] = (a, d), (b, c)
                    improved = True

    def decode_indices(self, defects: Sequence[int]) -> Correction:
        """Decode from defect volume indices (positions in ``self.volumes``)."""
        key = tuple(sorted(defects))
        cached = self._decode_cache.get(key)
        if cached is not None:
            return cached
        pairs, to_boundary, exact = self.match(key)
        flipped: set[int] = set()
        for a, b in pairs:
            flipped.symmetric_difference_update(self.pair_path(a, b))
        for v in to_boundary:
            flipped.symmetric_difference_update(self.boundary_path(v))
        correction = Correction(frozenset(flipped), exact)
        if len(self._decode_cache) < _DECODE_CACHE_LIMIT:
            self._decode_cache[key] = correction
        return correction

    def defect_indices(self, error_qubits: Iterable[int]) -> list[int]:
        """Defect volume indices produced by an error pattern, via toggling."""
        toggled: set[int] = set()
        for q in error_qubits:
            for v in self.face_incidence.get(q, ()):
                toggled.symmetric_difference_update((v,))
        return sorted(toggled)

    def decode(self, s: Syndrome) -> Correction:
        defect_ids = s.defects
        unknown = [v for v in defect_ids if v not in self.vol_index]
        if unknown:
            raise InvalidSyndromeError(f"syndrome volumes {unknown} not in this lattice")
        return self.decode_indices([self.vol_index[v] for v in defect_ids])


def decode_mwpm(
    cplx: CellComplex,
    graph: InteractionGraph,
    s: Syndrome,
    matcher: Optional[CubicMatcher] = None,
) -> Correction:
    """Minimum-weight matching decode; builds the matcher if not supplied."""
    if matcher is None:
        matcher = CubicMatcher(cplx, graph)
    return matcher.decode(s)


# -- adjudication -------------------------------------------------------------


def logical_success(
    cplx: CellComplex,
    graph: InteractionGraph,
    protected: Chain,
    residual: ErrorPattern,
) -> bool:
    """True iff the residual flips the protected surface an even number of times."""
    if protected.dim != DIM_FACE:
        raise ValueError("protected surface must be a 2-chain of faces")
    if not is_cycle(cplx, protected):
        raise ValueError("protected surface must be a cycle (closed surface)")
    protected_qubits = {graph.cell_to_qubit[c] for c in protected.support}
    return len(protected_qubits & residual.flipped) % 2 == 0


def run_pipeline(
    cplx: CellComplex,
    graph: InteractionGraph,
    error: ErrorPattern,
    protected: Chain,
    decoder: str,
    matcher: Optional[CubicMatcher] = None,
) -> DecodeReport:
    """error -> syndrome -> correction -> residual -> success, as one report."""
    syndrome = extract_syndrome(cplx, graph, error)
    dual = dual_parity(graph, error)
    if decoder == "lookup_l8":
        correction = decode_lookup_l8(cplx, graph, syndrome, dual)
    elif decoder == "mwpm":
        correction = decode_mwpm(cplx, graph, syndrome, matcher)
    elif decoder == "none":
        correction = Correction(frozenset())
    else:
        raise ValueError(f"unknown decoder {decoder!r}")
    residual = ErrorPattern(error.flipped ^ correction.flipped)
    success = logical_success(cplx, graph, protected, residual)
    return DecodeReport(syndrome, correction, residual, success, dual == -1)


def report_to_json(cplx: CellComplex, report: DecodeReport) -> str:
    """Serialize a decode report with labeled syndrome bits."""
    def name(vid: int) -> str:
        return cplx.label_of(vid) or str(vid)

    payload = {
        "syndrome": {name(v): bit for v, bit in sorted(report.syndrome.bits.items())},
        "correction": sorted(report.correction.flipped),
        "residual": sorted(report.residual.flipped),
        "success": report.success,
        "detected_uncorrectable": report.detected_uncorrectable,
    }
    return json.dumps(payload, indent=1) + "\n"
