"""Independent per-qubit flip channels and their physical parameterizations.

Frames: the "abstract" frame has Z errors flipping X-measurement outcomes
(the cell-complex picture); the "lab" frame has X errors flipping
Z-correlations (the optical experiment's convention).  The two differ by a
Hadamard on every qubit, and all classical sampling here is frame-agnostic:
a flip is a flip.

Reproducibility contract: every trial's randomness is derived purely from
(master seed, stream key, trial index), so results are independent of
execution order, chunking and thread count, and bit-stable across platforms
(numpy Philox/SeedSequence guarantees).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

FRAME_ABSTRACT = "abstract"
FRAME_LAB = "lab"
FRAMES = (FRAME_ABSTRACT, FRAME_LAB)

DEFAULT_CHUNK = 4096


@dataclass(frozen=True)
class ErrorPattern:
    """Set of flipped qubits."""

    flipped: frozenset[int]

    def __xor__(self, other: "ErrorPattern") -> "ErrorPattern":
        return ErrorPattern(self.flipped ^ other.flipped)

    def __len__(self) -> int:
        return len(self.flipped)


EMPTY_PATTERN = ErrorPattern(frozenset())


@dataclass(frozen=True)
class NoiseModel:
    """Per-qubit flip probabilities plus the frame the flips live in."""

    p: tuple[float, ...]
    frame: str = FRAME_ABSTRACT

    def __post_init__(self):
        if self.frame not in FRAMES:
            raise ValueError(f"unknown frame {self.frame!r}")
        for value in self.p:
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"flip probability {value} outside [0, 1]")

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, value in enumerate(self.p) if value > 0.0)

    @classmethod
    def uniform(
        cls,
        n: int,
        p: float,
        support: Optional[Iterable[int]] = None,
        frame: str = FRAME_ABSTRACT,
    ) -> "NoiseModel":
        """Probability ``p`` on the supported qubits (default: all), 0 elsewhere."""
        probs = [0.0] * n
        targets = range(n) if support is None else support
        for q in targets:
            probs[q] = p
        return cls(tuple(probs), frame)


def model_from_spec(n: int, spec: dict) -> NoiseModel:
    """Parse the JSON noise specification: {"p": x} or {"per_qubit": {...}},
    plus an optional "frame"."""
    frame = spec.get("frame", FRAME_ABSTRACT)
    if ("p" in spec) == ("per_qubit" in spec):
        raise ValueError('noise spec needs exactly one of "p" or "per_qubit"')
    if "p" in spec:
        return NoiseModel.uniform(n, float(spec["p"]), frame=frame)
    probs = [0.0] * n
    for key, value in spec["per_qubit"].items():
        qubit = int(key)
        if not 0 <= qubit < n:
            raise ValueError(f"per-qubit noise references qubit {qubit}, have {n}")
        probs[qubit] = float(value)
    return NoiseModel(tuple(probs), frame)


def model_to_spec(model: NoiseModel) -> dict:
    """Inverse of :func:`model_from_spec` (always per-qubit form)."""
    return {
        "per_qubit": {str(q): model.p[q] for q in model.support},
        "frame": model.frame,
    }


def waveplate_prob(theta: float) -> float:
    """Bit-flip probability of a half-wave plate oriented at angle theta."""
    return math.sin(2.0 * theta) ** 2


def beamsplitter_prob(r: float) -> float:
    """Flip probability for a spatial qubit mixed at reflectivity r.

    Convention: p = r.  Any monotone law would only relabel the sweep axis,
    so the identity map is used and documented as a modeling choice.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reflectivity {r} outside [0, 1]")
    return r


def stream(seed: int, *key: int) -> np.random.Generator:
    """Deterministic generator for (seed, key); independent of call order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed,) + key)))


def sample(model: NoiseModel, rng: np.random.Generator) -> ErrorPattern:
    """Draw one error pattern; each qubit flips independently."""
    draws = rng.random(model.n)
    flipped = frozenset(int(q) for q in np.nonzero(draws < np.asarray(model.p))[0])
    return ErrorPattern(flipped)


def uniform_blocks(
    seed: int,
    key: Sequence[int],
    trials: int,
    width: int,
    chunk: int = DEFAULT_CHUNK,
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (start_index, uniforms) blocks covering ``trials`` rows.

    Block c draws from the stream keyed by (seed, *key, c); row i of the
    sweep is row i % chunk of block i // chunk.  The decomposition is part
    of the reproducibility contract: identical (seed, key, trials, width)
    always produces identical rows, regardless of how callers parallelize
    over blocks.
    """
    for block_index, start in enumerate(range(0, trials, chunk)):
        count = min(chunk, trials - start)
        rng = stream(seed, *key, block_index)
        yield start, rng.random((count, width))


def patterns_from_uniforms(uniforms: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """Boolean error matrix: row per trial, column per qubit."""
    return uniforms < probs[np.newaxis, :]
