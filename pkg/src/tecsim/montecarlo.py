"""Monte Carlo sweeps of the noise -> syndrome -> decode -> success pipeline.

Each sweep point draws ``trials`` independent error patterns, runs the full
decoding pipeline, and counts trials whose protected correlation flips.
Rows carry the analytic curves alongside the estimates: the uncorrected
failure rate of an m-qubit correlation under flip probability p,

    P_unc = (1 - (1 - 2 p)^m) / 2      (m = 2: 1 - (1-p)^2 - p^2),

and, for the 8-qubit lattice with the lookup decoder, the corrected
residual-error polynomial

    P_cor = 1 - [(1-p)^6 + p^6] - [6 p (1-p)^5 + 6 (1-p) p^5]
              - [9 p^2 (1-p)^4 + 9 p^4 (1-p)^2].

Reproducibility: trial randomness derives from (seed, point index, block),
so identical configs give bit-identical results regardless of chunking or
thread count.  The vectorized 8-qubit fast path is validated against the
scalar reference pipeline in the test suite.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import cellcomplex as cc
from . import noise
from .decoder import CubicMatcher, run_pipeline
from .graphstate import FACE, InteractionGraph, graph_from_complex
from .noise import ErrorPattern, FRAME_ABSTRACT, FRAMES

LatticeSpec = Union[str, dict]
ProtectedSpec = Union[Sequence[str], dict]

DECODERS = ("lookup_l8", "mwpm", "none")


class ConfigError(ValueError):
    """Invalid sweep configuration."""


@dataclass(frozen=True)
class SweepConfig:
    lattice: LatticeSpec
    protected: ProtectedSpec
    decoder: str
    p_grid: tuple[float, ...]
    trials: int
    seed: int
    frame: str = FRAME_ABSTRACT
    support: str = "faces"  # noise support: "faces", "all", or "edges"
    per_qubit: Optional[tuple[tuple[int, float], ...]] = None  # overrides p_grid

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ConfigError(f"unknown decoder {self.decoder!r}")
        if self.frame not in FRAMES:
            raise ConfigError(f"unknown frame {self.frame!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        for p in self.p_grid:
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"probability {p} outside [0, 1]")
        if self.support not in ("faces", "all", "edges"):
            raise ConfigError(f"unknown noise support {self.support!r}")
        if self.per_qubit is not None:
            for qubit, p in self.per_qubit:
                if not 0.0 <= p <= 1.0:
                    raise ConfigError(f"per-qubit probability {p} outside [0, 1]")
        elif not self.p_grid:
            raise ConfigError("p_grid must be nonempty (or give per_qubit noise)")


@dataclass(frozen=True)
class SweepRow:
    p: float
    trials: int
    failures: int
    estimate: float
    stderr: float
    analytic_uncorrected: float
    analytic_corrected: float
    detected_uncorrectable: int = 0


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    rows: tuple[SweepRow, ...]


# -- analytic curves ----------------------------------------------------------


def uncorrected_failure(p: float, m: int = 2) -> float:
    """Failure rate of an unprotected m-qubit correlation under flip rate p."""
    return 0.5 * (1.0 - (1.0 - 2.0 * p) ** m)


def analytic_uncorrected(p: float) -> float:
    """1 - (1-p)^2 - p^2: the two-qubit protected correlation, uncorrected."""
    return 1.0 - (1.0 - p) ** 2 - p ** 2


def analytic_corrected_l8(p: float) -> float:
    """Residual error of the lookup-decoded 8-qubit lattice under uniform p."""
    q = 1.0 - p
    return (
        1.0
        - (q ** 6 + p ** 6)
        - (6.0 * p * q ** 5 + 6.0 * q * p ** 5)
        - (9.0 * p ** 2 * q ** 4 + 9.0 * p ** 4 * q ** 2)
    )


# -- lattice / surface resolution ---------------------------------------------


def resolve_lattice(spec: LatticeSpec) -> tuple[cc.CellComplex, InteractionGraph]:
    if spec == "l8":
        cplx = cc.build_l8()
    elif spec == "elementary":
        cplx = cc.build_elementary_cell()
    elif isinstance(spec, dict) and spec.get("kind") == "cubic":
        dims = spec["dims"]
        cplx = cc.build_cubic(
            int(dims[0]), int(dims[1]), int(dims[2]),
            defects=spec.get("defects", ()),
            periodic=spec.get("periodic", False),
        )
    else:
        raise ConfigError(f"unknown lattice spec {spec!r}")
    return cplx, graph_from_complex(cplx)


def resolve_protected(cplx: cc.CellComplex, spec: ProtectedSpec) -> cc.Chain:
    if isinstance(spec, dict) and "cross_section" in spec:
        section = spec["cross_section"]
        return cc.cross_section(cplx, section["axis"], int(section["coord"]))
    if isinstance(spec, dict):
        raise ConfigError(f"unknown protected-surface spec {spec!r}")
    return cplx.chain(cc.DIM_FACE, spec)


def noise_support(graph: InteractionGraph, kind: str) -> tuple[int, ...]:
    if kind == "faces":
        return graph.kind_qubits(FACE)
    if kind == "edges":
        return graph.kind_qubits("edge")
    return tuple(range(graph.n))


# -- sweep execution ----------------------------------------------------------


@dataclass
class _Pipeline:
    cplx: cc.CellComplex
    graph: InteractionGraph
    protected: cc.Chain
    decoder: str
    support: tuple[int, ...]
    matcher: Optional[CubicMatcher] = None
    protected_qubits: frozenset[int] = field(init=False)

    def __post_init__(self):
        self.protected_qubits = frozenset(
            self.graph.cell_to_qubit[c] for c in self.protected.support
        )
        if self.decoder == "mwpm" and self.matcher is None:
            self.matcher = CubicMatcher(self.cplx, self.graph)


def _build_pipeline(cfg: SweepConfig) -> _Pipeline:
    cplx, graph = resolve_lattice(cfg.lattice)
    protected = resolve_protected(cplx, cfg.protected)
    if not cc.is_cycle(cplx, protected):
        raise ConfigError("protected surface must be a cycle")
    if cfg.per_qubit is not None:
        support = tuple(sorted(q for q, _ in cfg.per_qubit))
        if any(not 0 <= q < graph.n for q in support):
            raise ConfigError("per-qubit noise references a qubit outside the lattice")
    else:
        support = noise_support(graph, cfg.support)
    return _Pipeline(cplx, graph, protected, cfg.decoder, support)


def _sweep_points(cfg: SweepConfig, pipe: _Pipeline) -> list[tuple[float, np.ndarray]]:
    """(label, per-support-qubit probability vector) per sweep point."""
    if cfg.per_qubit is not None:
        probs = dict(cfg.per_qubit)
        vector = np.array([probs[q] for q in pipe.support])
        values = set(vector.tolist())
        label = values.pop() if len(values) == 1 else math.nan
        return [(label, vector)]
    return [(p, np.full(len(pipe.support), p)) for p in cfg.p_grid]


def _uncorrected_from_probs(pipe: _Pipeline, probs: np.ndarray) -> float:
    """Failure rate of the raw protected correlation under per-qubit flips."""
    product = 1.0
    col_of = {q: i for i, q in enumerate(pipe.support)}
    for q in pipe.protected_qubits:
        p_q = probs[col_of[q]] if q in col_of else 0.0
        product *= 1.0 - 2.0 * p_q
    return 0.5 * (1.0 - product)


def _corrected_if_known(cfg: SweepConfig, pipe: _Pipeline, probs: np.ndarray) -> float:
    """The closed-form corrected curve, when one applies to this point."""
    if cfg.decoder != "lookup_l8" or pipe.cplx.meta.get("lattice") != "l8":
        return math.nan
    col_of = {q: i for i, q in enumerate(pipe.support)}
    face_probs = set()
    for q in pipe.graph.kind_qubits(FACE):
        face_probs.add(float(probs[col_of[q]]) if q in col_of else 0.0)
    if len(face_probs) != 1:
        return math.nan
    return analytic_corrected_l8(face_probs.pop())


def _l8_layout(pipe: _Pipeline) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Column indices into the support matrix for the vectorized decode."""
    cplx, graph = pipe.cplx, pipe.graph
    col_of = {q: i for i, q in enumerate(pipe.support)}

    def col(label: str) -> int:
        return col_of[graph.cell_to_qubit[cplx.id_of(label)]]

    side_u = np.array([col("f1"), col("f3"), col("f4")])
    side_p = np.array([col("f1'"), col("f3'"), col("f4'")])
    prot_cols = np.array(sorted(
        col_of[q] for q in pipe.protected_qubits if q in col_of
    ))
    edge_cols = np.array(sorted(
        col_of[q] for q in graph.kind_qubits("edge") if q in col_of
    ), dtype=int)
    return side_u, side_p, prot_cols, edge_cols


def _decode_block_l8(
    errors: np.ndarray,
    side_u: np.ndarray,
    side_p: np.ndarray,
    prot_cols: np.ndarray,
    edge_cols: np.ndarray,
    protected_is_f1_pair: bool,
) -> tuple[int, int]:
    """Vectorized lookup decode; returns (failures, detected_uncorrectable)."""
    failures = 0
    residual_parity = np.zeros(errors.shape[0], dtype=bool)
    for side in (side_u, side_p):
        e1, e3, e4 = errors[:, side[0]], errors[:, side[1]], errors[:, side[2]]
        s_first = e1 ^ e3   # volume bounded by {f1, f3}
        s_second = e3 ^ e4  # volume bounded by {f3, f4}
        corr_f1 = s_first & ~s_second
        corr_f3 = s_first & s_second
        corr_f4 = ~s_first & s_second
        r1 = e1 ^ corr_f1
        r3 = e3 ^ corr_f3
        r4 = e4 ^ corr_f4
        if protected_is_f1_pair:
            residual_parity ^= r1
        else:
            # General protected support: accumulate per-column residual parity.
            for col, res in ((side[0], r1), (side[1], r3), (side[2], r4)):
                if col in prot_cols:
                    residual_parity ^= res
    failures = int(np.count_nonzero(residual_parity))
    flagged = 0
    if edge_cols.size:
        flagged = int(np.count_nonzero(errors[:, edge_cols].sum(axis=1) % 2))
    return failures, flagged


def _run_point_l8(cfg: SweepConfig, pipe: _Pipeline, point: int, probs: np.ndarray, threads: int) -> tuple[int, int]:
    side_u, side_p, prot_cols, edge_cols = _l8_layout(pipe)
    f1_cols = {int(side_u[0]), int(side_p[0])}
    protected_is_f1_pair = set(int(c) for c in prot_cols) == f1_cols

    def work(block: tuple[int, np.ndarray]) -> tuple[int, int]:
        _, uniforms = block
        errors = noise.patterns_from_uniforms(uniforms, probs)
        return _decode_block_l8(
            errors, side_u, side_p, prot_cols, edge_cols, protected_is_f1_pair
        )

    blocks = noise.uniform_blocks(cfg.seed, (point,), cfg.trials, len(pipe.support))
    results = _map_blocks(work, blocks, threads)
    failures = sum(r[0] for r in results)
    flagged = sum(r[1] for r in results)
    return failures, flagged


def _run_point_mwpm(cfg: SweepConfig, pipe: _Pipeline, point: int, probs: np.ndarray, threads: int) -> tuple[int, int]:
    """Matching sweep point: toggled defects + index decode, no per-trial dicts."""
    support = pipe.support
    matcher = pipe.matcher
    assert matcher is not None
    edge_qubits = frozenset(pipe.graph.kind_qubits("edge"))
    protected = pipe.protected_qubits

    def work(block: tuple[int, np.ndarray]) -> tuple[int, int]:
        _, uniforms = block
        errors = noise.patterns_from_uniforms(uniforms, probs)
        failures = flagged = 0
        row_idx, col_idx = np.nonzero(errors)
        cols = col_idx.tolist()
        start = 0
        for count in np.bincount(row_idx, minlength=0):
            if count == 0:
                continue
            qubits = [support[c] for c in cols[start:start + count]]
            start += count
            defects = matcher.defect_indices(qubits)
            correction = matcher.decode_indices(defects)
            parity = len(protected.intersection(qubits)) + len(protected & correction.flipped)
            failures += parity % 2
            flagged += len(edge_qubits.intersection(qubits)) % 2
        return failures, flagged

    blocks = noise.uniform_blocks(cfg.seed, (point,), cfg.trials, len(pipe.support))
    results = _map_blocks(work, blocks, threads)
    return sum(r[0] for r in results), sum(r[1] for r in results)


def _run_point_generic(cfg: SweepConfig, pipe: _Pipeline, point: int, probs: np.ndarray, threads: int) -> tuple[int, int]:
    support = pipe.support

    def work(block: tuple[int, np.ndarray]) -> tuple[int, int]:
        _, uniforms = block
        errors = noise.patterns_from_uniforms(uniforms, probs)
        failures = flagged = 0
        for row in range(errors.shape[0]):
            cols = np.nonzero(errors[row])[0]
            pattern = ErrorPattern(frozenset(int(support[c]) for c in cols))
            report = run_pipeline(
                pipe.cplx, pipe.graph, pattern, pipe.protected,
                pipe.decoder, pipe.matcher,
            )
            failures += not report.success
            flagged += report.detected_uncorrectable
        return failures, flagged

    blocks = noise.uniform_blocks(cfg.seed, (point,), cfg.trials, len(pipe.support))
    results = _map_blocks(work, blocks, threads)
    return sum(r[0] for r in results), sum(r[1] for r in results)


def _map_blocks(work, blocks: Iterable, threads: int) -> list:
    if threads <= 1:
        return [work(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, blocks))


def run_sweep(cfg: SweepConfig, threads: int = 1) -> SweepResult:
    """Run the full sweep; bit-identical for identical (cfg, seed)."""
    pipe = _build_pipeline(cfg)
    face_qubits = set(pipe.graph.kind_qubits(FACE))
    is_l8_fast = (
        cfg.decoder == "lookup_l8"
        and pipe.cplx.meta.get("lattice") == "l8"
        and face_qubits <= set(pipe.support)
    )
    rows = []
    for point, (label, probs) in enumerate(_sweep_points(cfg, pipe)):
        if is_l8_fast:
            failures, flagged = _run_point_l8(cfg, pipe, point, probs, threads)
        elif cfg.decoder == "mwpm":
            failures, flagged = _run_point_mwpm(cfg, pipe, point, probs, threads)
        else:
            failures, flagged = _run_point_generic(cfg, pipe, point, probs, threads)
        estimate = failures / cfg.trials
        stderr = math.sqrt(max(estimate * (1.0 - estimate), 0.0) / cfg.trials)
        rows.append(SweepRow(
            p=label,
            trials=cfg.trials,
            failures=failures,
            estimate=estimate,
            stderr=stderr,
            analytic_uncorrected=_uncorrected_from_probs(pipe, probs),
            analytic_corrected=_corrected_if_known(cfg, pipe, probs),
            detected_uncorrectable=flagged,
        ))
    return SweepResult(cfg, tuple(rows))


def reference_trial(
    cfg_or_pipe: Union[SweepConfig, _Pipeline],
    pattern: ErrorPattern,
):
    """Scalar reference pipeline for one explicit error pattern."""
    pipe = cfg_or_pipe if isinstance(cfg_or_pipe, _Pipeline) else _build_pipeline(cfg_or_pipe)
    return run_pipeline(pipe.cplx, pipe.graph, pattern, pipe.protected, pipe.decoder, pipe.matcher)


# -- exhaustive oracle ---------------------------------------------------------


def brute_force_profile(
    cplx: cc.CellComplex,
    graph: InteractionGraph,
    decoder: str,
    protected: cc.Chain,
    support: Optional[Sequence[int]] = None,
) -> dict[int, int]:
    """Success counts per error weight over all error subsets of the support.

    Default support: the face qubits for the correcting decoders (errors on
    edge qubits are detected but not corrected, and the paper's error model
    drives the face qubits), every qubit for the trivial decoder.
    """
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")
    if support is None:
        support = noise_support(graph, "faces" if decoder != "none" else "all")
    support = tuple(support)
    k = len(support)
    if k > 20:
        raise ValueError(f"support of {k} qubits exceeds the 20-qubit enumeration cap")

    counts = {w: 0 for w in range(k + 1)}
    patterns = np.arange(1 << k, dtype=np.int64)
    weights = np.bitwise_count(patterns)

    if decoder == "none":
        protected_qubits = {graph.cell_to_qubit[c] for c in protected.support}
        if not cc.is_cycle(cplx, protected):
            raise ValueError("protected surface must be a cycle")
        mask = 0
        for i, q in enumerate(support):
            if q in protected_qubits:
                mask |= 1 << i
        success = (np.bitwise_count(patterns & mask) & 1) == 0
        for w in range(k + 1):
            counts[w] = int(np.count_nonzero(success & (weights == w)))
        return counts

    pipe = _Pipeline(cplx, graph, protected, decoder, support)
    for bits in patterns:
        pattern = ErrorPattern(frozenset(
            support[i] for i in range(k) if (int(bits) >> i) & 1
        ))
        report = run_pipeline(cplx, graph, pattern, protected, decoder, pipe.matcher)
        counts[int(weights[bits])] += report.success
    return counts


# -- exact confidence intervals ---------------------------------------------------


def _binom_tail_ge(k: int, n: int, p: float, log_comb: Sequence[float]) -> float:
    """P(X >= k) for X ~ Binomial(n, p), summed in log space."""
    if p <= 0.0:
        return 0.0 if k > 0 else 1.0
    if p >= 1.0:
        return 1.0
    log_p, log_q = math.log(p), math.log(1.0 - p)
    total = 0.0
    for i in range(k, n + 1):
        total += math.exp(log_comb[i] + i * log_p + (n - i) * log_q)
    return min(total, 1.0)


def binomial_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Exact (Clopper-Pearson) two-sided confidence interval for a rate.

    Inverts the binomial tail probabilities by bisection; no normal
    approximation anywhere.
    """
    if not 0 <= failures <= trials:
        raise ValueError("failures must lie in [0, trials]")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    alpha = 1.0 - confidence
    log_comb = [
        math.lgamma(trials + 1) - math.lgamma(i + 1) - math.lgamma(trials - i + 1)
        for i in range(trials + 1)
    ]

    def bisect(target_fn, want: float) -> float:
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if target_fn(mid) < want:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    if failures == 0:
        lower = 0.0
    else:
        # Largest p with P(X >= failures | p) = alpha/2.
        lower = bisect(lambda p: _binom_tail_ge(failures, trials, p, log_comb), alpha / 2)
    if failures == trials:
        upper = 1.0
    else:
        # Smallest p with P(X <= failures | p) = alpha/2, i.e. where the
        # complementary tail reaches 1 - alpha/2.
        upper = bisect(
            lambda p: _binom_tail_ge(failures + 1, trials, p, log_comb),
            1.0 - alpha / 2,
        )
    return lower, upper


# -- CSV ------------------------------------------------------------------------

CSV_COLUMNS = (
    "p", "trials", "failures", "estimate", "stderr",
    "analytic_uncorrected", "analytic_corrected",
)


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def to_csv(result: SweepResult) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in result.rows:
        lines.append(",".join([
            _fmt(row.p),
            str(row.trials),
            str(row.failures),
            _fmt(row.estimate),
            _fmt(row.stderr),
            _fmt(row.analytic_uncorrected),
            _fmt(row.analytic_corrected),
        ]))
    return "\n".join(lines) + "\n"


def analytic_curves_tsv(p_step: float = 0.001) -> str:
    """Fine-grained analytic curves for plotting, tab-separated."""
    lines = ["p\tanalytic_uncorrected\tanalytic_corrected"]
    steps = int(round(1.0 / p_step))
    for i in range(steps + 1):
        p = i * p_step
        lines.append(f"{_fmt(p)}\t{_fmt(analytic_uncorrected(p))}\t{_fmt(analytic_corrected_l8(p))}")
    return "\n".join(lines) + "\n"
