"""Dense pure-state simulation for up to 20 qubits.

Provides cluster-state preparation from an interaction graph, the
experiment's 8-qubit lab state, expectation values of tensor-product
observables, Pauli error application, and the entanglement-witness and
fidelity-bound mathematics.

Conventions:
  * Qubit k is bit k of the amplitude index (qubit 0 = least significant).
  * Absolute tolerance 1e-9 on norms and expectations (ATOL below); all
    comparisons in tests use this constant.
  * Global phase is never compared; overlaps and fidelities are the only
    state-comparison primitives.
  * Mixed states appear only as explicit ensembles: lists of
    (weight, StateVector) pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graphstate import InteractionGraph, PauliOp

ATOL = 1e-9
MAX_QUBITS = 20

_SQRT2 = math.sqrt(2.0)
_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2


class StateSizeError(ValueError):
    """Requested state exceeds the dense-simulation qubit cap."""


class StateVector:
    """2**n complex amplitudes; normalized within ATOL."""

    __slots__ = ("n", "amps")

    def __init__(self, n: int, amps: np.ndarray):
        if n > MAX_QUBITS:
            raise StateSizeError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit cap")
        amps = np.asarray(amps, dtype=complex)
        if amps.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} amplitudes, got {amps.shape}")
        self.n = n
        self.amps = amps

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def check_normalized(self) -> None:
        if abs(self.norm - 1.0) > ATOL:
            raise ValueError(f"state norm {self.norm} deviates from 1 beyond {ATOL}")


def basis_state(n: int, index: int) -> StateVector:
    amps = np.zeros(1 << n, dtype=complex)
    amps[index] = 1.0
    return StateVector(n, amps)


def plus_state(n: int) -> StateVector:
    if n > MAX_QUBITS:
        raise StateSizeError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit cap")
    amps = np.full(1 << n, 1.0 / math.sqrt(1 << n), dtype=complex)
    return StateVector(n, amps)


def overlap(a: StateVector, b: StateVector) -> complex:
    if a.n != b.n:
        raise ValueError("qubit count mismatch")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    return abs(overlap(a, b)) ** 2


# -- single-qubit / diagonal operations -----------------------------------


def _apply_single(amps: np.ndarray, qubit: int, matrix: np.ndarray) -> np.ndarray:
    """Apply a 2x2 matrix on one qubit (qubit 0 = least significant bit)."""
    n_amp = amps.shape[0]
    reshaped = amps.reshape(n_amp >> (qubit + 1), 2, 1 << qubit)
    return np.einsum("ab,ibj->iaj", matrix, reshaped).reshape(n_amp)


def apply_hadamard(state: StateVector, qubits: Iterable[int]) -> StateVector:
    amps = state.amps
    for q in qubits:
        amps = _apply_single(amps, q, _HADAMARD)
    return StateVector(state.n, amps)


def apply_cz(state: StateVector, i: int, j: int) -> StateVector:
    idx = np.arange(state.amps.shape[0])
    mask = ((idx >> i) & (idx >> j) & 1).astype(bool)
    amps = state.amps.copy()
    amps[mask] *= -1.0
    return StateVector(state.n, amps)


def apply_pauli(state: StateVector, qubits: Iterable[int], kind: str) -> StateVector:
    """Apply X or Z to each listed qubit; returns a new state."""
    if kind not in ("X", "Z"):
        raise ValueError("kind must be 'X' or 'Z'")
    mask = 0
    for q in qubits:
        if not 0 <= q < state.n:
            raise ValueError(f"qubit {q} out of range for {state.n}-qubit state")
        mask |= 1 << q
    idx = _indices(state.amps.shape[0])
    if kind == "X":
        amps = state.amps[idx ^ mask]
    else:
        parity = (np.bitwise_count(idx & mask) & 1).astype(bool)
        amps = state.amps.copy()
        amps[parity] *= -1.0
    return StateVector(state.n, amps)


# -- preparation ------------------------------------------------------------


def prepare_graph_state(graph: InteractionGraph) -> StateVector:
    """|+>^n followed by a controlled-phase on every interaction edge."""
    if graph.n > MAX_QUBITS:
        raise StateSizeError(f"graph has {graph.n} qubits, cap is {MAX_QUBITS}")
    n = graph.n
    amps = np.full(1 << n, 1.0 / math.sqrt(1 << n), dtype=complex)
    idx = np.arange(1 << n)
    for i, j in sorted(graph.edges):
        both = ((idx >> i) & (idx >> j) & 1).astype(bool)
        amps[both] *= -1.0
    return StateVector(n, amps)


# Lab-state qubit layout: positions 0..7 hold the polarization qubits
# 1, 3, 4 then their spatial partners 1', 3', 4', then the pair 2, 2'.
# This matches the interaction-graph ordering of the 8-qubit lattice
# (face qubits f1, f3, f4, f1', f3', f4' then edge qubits e2, e2').
LAB_QUBIT_NAMES = ("1", "3", "4", "1'", "3'", "4'", "2", "2'")


def prepare_lab_state() -> StateVector:
    """The 8-photon cluster state as produced in the optical experiment.

    Pipeline: 4-qubit GHZ state, Hadamard on qubit 2, then redundant
    encoding a|H> + b|V> -> a|HH'> + b|VV'> adhering a spatial qubit onto
    each polarization qubit.  H is encoded as bit 0, V as bit 1.
    """
    # GHZ on logical qubits (1, 2, 3, 4), qubit order = bit order.
    ghz = np.zeros(16, dtype=complex)
    ghz[0b0000] = 1.0 / _SQRT2
    ghz[0b1111] = 1.0 / _SQRT2
    four = _apply_single(ghz, 1, _HADAMARD)  # Hadamard on qubit 2 (bit 1)

    # Redundant encoding: each 4-bit basis state |x1 x2 x3 x4> becomes the
    # 8-qubit state with layout (1,3,4,1',3',4',2,2') and x_k' = x_k.
    amps = np.zeros(256, dtype=complex)
    for src in range(16):
        if four[src] == 0:
            continue
        x1 = (src >> 0) & 1
        x2 = (src >> 1) & 1
        x3 = (src >> 2) & 1
        x4 = (src >> 3) & 1
        dst = (
            (x1 << 0) | (x3 << 1) | (x4 << 2)
            | (x1 << 3) | (x3 << 4) | (x4 << 5)
            | (x2 << 6) | (x2 << 7)
        )
        amps[dst] += four[src]
    return StateVector(8, amps)


def witness_partner_state() -> StateVector:
    """The orthogonal partner of the lab state (V-branch sign flipped)."""
    psi = prepare_lab_state()
    amps = psi.amps.copy()
    idx = np.arange(256)
    # V-branch: qubits 1,3,4,1',3',4' (bits 0..5) all set.
    v_branch = (idx & 0b00111111) == 0b00111111
    amps[v_branch] *= -1.0
    return StateVector(8, amps)


# -- observables ------------------------------------------------------------


def xy_factor(alpha: float) -> np.ndarray:
    """cos(alpha) X + sin(alpha) Y."""
    return math.cos(alpha) * _PAULI["X"] + math.sin(alpha) * _PAULI["Y"]


def projector_factor(bit: int) -> np.ndarray:
    """Rank-1 projector onto a computational basis level (0 = H, 1 = V)."""
    m = np.zeros((2, 2), dtype=complex)
    m[bit, bit] = 1.0
    return m


@dataclass(frozen=True, eq=False)
class Observable:
    """Tensor product of Hermitian single-qubit factors."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        for f in self.factors:
            if f.shape != (2, 2):
                raise ValueError("factors must be 2x2 matrices")
            if not np.allclose(f, f.conj().T, atol=ATOL):
                raise ValueError("factors must be Hermitian")

    @property
    def n(self) -> int:
        return len(self.factors)

    @classmethod
    def from_string(cls, text: str) -> "Observable":
        return cls(tuple(_PAULI[ch] for ch in text.strip()))

    @classmethod
    def from_map(cls, n: int, factors: dict[int, np.ndarray]) -> "Observable":
        out = [_PAULI["I"]] * n
        for qubit, mat in factors.items():
            out[qubit] = mat
        return cls(tuple(out))


def apply_observable(state: StateVector, obs: Observable) -> StateVector:
    if obs.n != state.n:
        raise ValueError("observable qubit count does not match state")
    amps = state.amps
    for qubit, mat in enumerate(obs.factors):
        if np.array_equal(mat, _PAULI["I"]):
            continue
        amps = _apply_single(amps, qubit, mat)
    return StateVector(state.n, amps)


def expectation(state: StateVector, obs: Observable) -> float:
    """<state| obs |state>, checked real within ATOL."""
    value = complex(np.vdot(state.amps, apply_observable(state, obs).amps))
    if abs(value.imag) > ATOL:
        raise ValueError(f"expectation has imaginary residue {value.imag}")
    return value.real


_INDEX_CACHE: dict[int, np.ndarray] = {}


def _indices(n_amps: int) -> np.ndarray:
    idx = _INDEX_CACHE.get(n_amps)
    if idx is None:
        idx = np.arange(n_amps)
        _INDEX_CACHE[n_amps] = idx
    return idx


def pauli_expectation(state: StateVector, op: PauliOp) -> float:
    """Fast mask-based <state| op |state> for signed Pauli products."""
    if op.n != state.n:
        raise ValueError("operator qubit count does not match state")
    if not op.is_hermitian:
        raise ValueError("expectation of a non-Hermitian Pauli operator")
    idx = _indices(state.amps.shape[0])
    moved = state.amps[idx ^ op.x]  # fancy indexing copies, safe to negate
    if op.z:
        # parity((s^x) & z) = parity(s & z) xor parity(x & z); the constant
        # part is folded into the prefactor below.
        odd = (np.bitwise_count(idx & op.z) & 1).astype(bool)
        np.negative(moved, out=moved, where=odd)
    # op = i^phase * (letter product); letter product = i^|Y| X^x Z^z.
    overlap = (op.x & op.z).bit_count()
    value = complex(np.vdot(state.amps, moved)) * (1j ** ((op.phase + overlap) % 4))
    if overlap & 1:
        value = -value
    if abs(value.imag) > ATOL:
        raise ValueError(f"expectation has imaginary residue {value.imag}")
    return value.real


# -- entanglement witness ----------------------------------------------------


def witness_value(state: StateVector) -> float:
    """1/2 - |<psi|state>|^2 + |<psi'|state>|^2 for the ideal lab state psi."""
    if state.n != 8:
        raise ValueError("the witness is defined on 8-qubit states")
    psi = prepare_lab_state()
    partner = witness_partner_state()
    return 0.5 - fidelity(psi, state) + fidelity(partner, state)


@dataclass(frozen=True)
class WitnessDecomposition:
    """Local-measurement evaluation of the witness, term by term.

    ``m_terms[k]`` is the expectation of the alternating-sign xy-plane
    product over all 8 qubits at angle k*pi/8; ``m_conj_terms[k]`` its
    conjugate under X on the pair (2, 2'); ``n_terms[k]`` the 6-qubit
    xy-plane product at angle k*pi/6 combined with the projector difference
    (|HH'><HH'| - |VV'><VV'|) on (2, 2').
    """

    m_terms: tuple[float, ...]
    m_conj_terms: tuple[float, ...]
    n_terms: tuple[float, ...]

    @property
    def value(self) -> float:
        m_avg = sum(self.m_terms) / 8.0
        m_conj_avg = sum(self.m_conj_terms) / 8.0
        n_avg = sum(self.n_terms) / 6.0
        return 0.5 - 0.5 * (-m_avg + m_conj_avg + n_avg)


def witness_decomposition(state: StateVector) -> WitnessDecomposition:
    if state.n != 8:
        raise ValueError("the witness is defined on 8-qubit states")
    m_terms = []
    m_conj_terms = []
    for k in range(8):
        alpha = k * math.pi / 8.0
        sign = (-1.0) ** k
        plain = Observable(tuple(xy_factor(alpha) for _ in range(8)))
        conj = Observable(tuple(
            xy_factor(-alpha if q in (6, 7) else alpha) for q in range(8)
        ))
        m_terms.append(sign * expectation(state, plain))
        m_conj_terms.append(sign * expectation(state, conj))
    n_terms = []
    for k in range(6):
        alpha = k * math.pi / 6.0
        sign = (-1.0) ** k
        value = 0.0
        for bit, proj_sign in ((0, 1.0), (1, -1.0)):
            factors = {q: xy_factor(alpha) for q in range(6)}
            factors[6] = projector_factor(bit)
            factors[7] = projector_factor(bit)
            value += proj_sign * expectation(state, Observable.from_map(8, factors))
        n_terms.append(sign * value)
    return WitnessDecomposition(tuple(m_terms), tuple(m_conj_terms), tuple(n_terms))


def witness_via_decomposition(state: StateVector) -> float:
    """Witness value evaluated through local-measurement settings only."""
    return witness_decomposition(state).value


def fidelity_bound(witness: float) -> float:
    """Lower bound on fidelity with the ideal state implied by a witness value."""
    return 0.5 - witness


def ensemble_witness(ensemble: Sequence[tuple[float, StateVector]]) -> float:
    """Witness expectation of a mixture given as (weight, pure state) pairs."""
    total = sum(w for w, _ in ensemble)
    if abs(total - 1.0) > ATOL:
        raise ValueError(f"ensemble weights sum to {total}, expected 1")
    return sum(w * witness_value(s) for w, s in ensemble)


def depolarized_ensemble(visibility: float) -> list[tuple[float, StateVector]]:
    """Ideal lab state mixed with the maximally mixed state at given visibility."""
    if not 0.0 <= visibility <= 1.0:
        raise ValueError("visibility must lie in [0, 1]")
    out: list[tuple[float, StateVector]] = [(visibility, prepare_lab_state())]
    if visibility < 1.0:
        w = (1.0 - visibility) / 256.0
        out.extend((w, basis_state(8, k)) for k in range(256))
    return out


# -- state dumps -------------------------------------------------------------

_DUMP_MAGIC = "tecsim-state v1"


def save_state(state: StateVector, path: str, binary: bool = True) -> None:
    """Dump amplitudes with an n-qubit header and bit-order note.

    Binary mode round-trips exactly (raw little-endian complex128 bytes);
    text mode stores one "real imag" pair per line at 17 significant digits.
    """
    fmt = "binary" if binary else "text"
    header = (
        f"{_DUMP_MAGIC} qubits={state.n} format={fmt} "
        "dtype=complex128 bit_order=qubit0-lsb\n"
    )
    if binary:
        with open(path, "wb") as fh:
            fh.write(header.encode("ascii"))
            fh.write(np.ascontiguousarray(state.amps, dtype="<c16").tobytes())
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(header)
            for amp in state.amps:
                fh.write(f"{amp.real:.17g} {amp.imag:.17g}\n")


def load_state(path: str) -> StateVector:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").strip()
        fields = dict(part.split("=", 1) for part in header.split()[2:])
        if not header.startswith(_DUMP_MAGIC):
            raise ValueError("not a state dump file")
        n = int(fields["qubits"])
        if fields["format"] == "binary":
            amps = np.frombuffer(fh.read((1 << n) * 16), dtype="<c16").copy()
        else:
            rows = fh.read().decode("ascii").split()
            values = [float(v) for v in rows]
            amps = np.array(values[0::2]) + 1j * np.array(values[1::2])
    return StateVector(n, amps)


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish random pure state (normalized complex Gaussian amplitudes)."""
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    return StateVector(n, amps)
