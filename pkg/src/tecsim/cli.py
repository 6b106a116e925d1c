"""Command-line front end.

Subcommands: build, table1, syndrome, decode, sweep, profile, witness,
verify.  Every subcommand resolves its arguments to a plain config dict,
executes it into an output directory, and writes a run manifest
(manifest.json) recording tool version, seed, frame, resolved config and
output paths; ``replay_manifest`` re-executes a manifest and reproduces the
outputs bit-exactly.

Exit codes: 0 success, 1 usage/config error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__
from . import cellcomplex as cc
from . import decoder as dec
from . import graphstate as gs
from . import montecarlo as mc
from . import noise
from . import statevector as sv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class CheckFailure(Exception):
    pass


# Paper-style qubit names on the 8-qubit lattice <-> face/edge cell labels.
_L8_QUBIT_CELLS = {
    "1": "f1", "3": "f3", "4": "f4",
    "1'": "f1'", "3'": "f3'", "4'": "f4'",
    "2": "e2", "2'": "e2'",
}


def _parse_lattice(args: argparse.Namespace) -> dict | str:
    if args.lattice in ("l8", "elementary"):
        return args.lattice
    if args.lattice == "cubic":
        if not args.dims:
            raise UsageError("--dims LX,LY,T is required for cubic lattices")
        dims = [int(v) for v in args.dims.split(",")]
        if len(dims) != 3:
            raise UsageError("--dims takes three comma-separated integers")
        spec: dict = {"kind": "cubic", "dims": dims}
        if args.periodic:
            if args.periodic == "all":
                spec["periodic"] = True
            else:
                axes = set(args.periodic.split(","))
                unknown = axes - {"x", "y", "z"}
                if unknown:
                    raise UsageError(f"unknown periodic axes {sorted(unknown)}")
                spec["periodic"] = [a in axes for a in ("x", "y", "z")]
        if args.defect:
            spec["defects"] = list(args.defect)
        return spec
    raise UsageError(f"unknown lattice {args.lattice!r}")


def _resolve_error_qubits(cplx: cc.CellComplex, graph: gs.InteractionGraph, text: str) -> list[int]:
    """Parse an error spec: a Pauli string ("IIZI...": flips where non-I), or a
    comma list of qubit names (8-qubit lattice), cell labels, or qubit ids."""
    qubits = []
    if not text:
        return qubits
    stripped = text.strip().lstrip("-−")
    if len(stripped) == graph.n and set(stripped) <= set("IXYZ") and graph.n > 1:
        op = gs.PauliOp.from_string(stripped)
        return [q for q in range(graph.n) if op.letter(q) != "I"]
    for token in text.split(","):
        token = token.strip().replace("′", "'")
        label = _L8_QUBIT_CELLS.get(token, token)
        if label in cplx.labels:
            cell_id = cplx.id_of(label)
            qubit = graph.cell_to_qubit.get(cell_id)
            if qubit is None:
                raise UsageError(f"cell {label!r} carries no qubit")
            qubits.append(qubit)
            continue
        try:
            qubit = int(token)
        except ValueError:
            raise UsageError(f"unknown qubit/cell {token!r}") from None
        if not 0 <= qubit < graph.n:
            raise UsageError(f"qubit id {qubit} out of range")
        qubits.append(qubit)
    return qubits


def _parse_p_grid(text: str) -> list[float]:
    """Accept "0.1,0.2,0.3" or "start:stop:step" grids."""
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        count = int(round((stop - start) / step))
        values = [start + i * step for i in range(count + 1)]
    else:
        values = [float(v) for v in text.split(",")]
    return [round(v, 12) for v in values]


# -- manifest / execution harness --------------------------------------------


def _write_manifest(outdir: Path, subcommand: str, config: dict, outputs: list[str]) -> None:
    manifest = {
        "tool": "tecsim",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "outputs": outputs,
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )


def replay_manifest(path: str, outdir: Optional[str] = None) -> list[str]:
    """Re-execute a recorded run; outputs are reproduced bit-exactly."""
    manifest = json.loads(Path(path).read_text(encoding="utf-8"))
    execute = _EXECUTORS[manifest["subcommand"]]
    target = Path(outdir) if outdir else Path(path).parent
    target.mkdir(parents=True, exist_ok=True)
    outputs = execute(manifest["config"], target)
    _write_manifest(target, manifest["subcommand"], manifest["config"], outputs)
    return outputs


# -- executors (resolved config dict -> files) --------------------------------


def _exec_build(config: dict, outdir: Path) -> list[str]:
    cplx, _ = mc.resolve_lattice(config["lattice"])
    path = outdir / "complex.json"
    path.write_text(cc.to_json(cplx), encoding="utf-8")
    counts = cplx.counts()
    print(
        f"{counts['volumes']} volumes, {counts['faces']} faces, "
        f"{counts['edges']} edges, {counts['sites']} sites"
        + (f", {len(cplx.removed)} removed qubit cells" if cplx.removed else "")
    )
    return [path.name]


_TABLE1_EXPECTED = {
    "1": (-1, 1, 1, 1),
    "3": (-1, -1, 1, 1),
    "4": (1, -1, 1, 1),
    "1'": (1, 1, -1, 1),
    "3'": (1, 1, -1, -1),
    "4'": (1, 1, 1, -1),
}
_TABLE1_COLUMNS = ("C13", "C34", "C1'3'", "C3'4'")


def table1_rows() -> dict[str, tuple[int, int, int, int]]:
    """Syndrome quadruples for each single face-qubit error on the 8-qubit lattice."""
    cplx = cc.build_l8()
    graph = gs.graph_from_complex(cplx)
    order = [cplx.id_of(v) for v in ("w", "v", "y", "z")]  # C13, C34, C1'3', C3'4'
    rows = {}
    for name in ("1", "3", "4", "1'", "3'", "4'"):
        qubit = graph.cell_to_qubit[cplx.id_of(_L8_QUBIT_CELLS[name])]
        syndrome = dec.extract_syndrome(cplx, graph, noise.ErrorPattern(frozenset({qubit})))
        rows[name] = tuple(syndrome.bits[v] for v in order)
    return rows


def _exec_table1(config: dict, outdir: Path) -> list[str]:
    rows = table1_rows()
    lines = ["error  " + "  ".join(f"{c:>6}" for c in _TABLE1_COLUMNS)]
    mismatches = []
    for name, bits in rows.items():
        lines.append(f"{name:<6} " + "  ".join(f"{b:>+6d}" for b in bits))
        if bits != _TABLE1_EXPECTED[name]:
            mismatches.append(name)
    text = "\n".join(lines) + "\n"
    print(text, end="")
    path = outdir / "table1.txt"
    path.write_text(text, encoding="utf-8")
    if mismatches:
        raise CheckFailure(f"syndrome mismatch for errors {mismatches}")
    print("all 24 syndrome bits match the expected table")
    return [path.name]


def _exec_syndrome(config: dict, outdir: Path) -> list[str]:
    cplx, graph = mc.resolve_lattice(config["lattice"])
    pattern = noise.ErrorPattern(frozenset(config["error_qubits"]))
    syndrome = dec.extract_syndrome(cplx, graph, pattern)
    payload = {
        "error_qubits": sorted(pattern.flipped),
        "syndrome": {
            (cplx.label_of(v) or str(v)): bit for v, bit in sorted(syndrome.bits.items())
        },
        "dual": dec.dual_parity(graph, pattern),
        "frame": config["frame"],
    }
    text = json.dumps(payload, indent=1) + "\n"
    print(text, end="")
    path = outdir / "syndrome.json"
    path.write_text(text, encoding="utf-8")
    return [path.name]


def _exec_decode(config: dict, outdir: Path) -> list[str]:
    cplx, graph = mc.resolve_lattice(config["lattice"])
    protected = mc.resolve_protected(cplx, config["protected"])
    pattern = noise.ErrorPattern(frozenset(config["error_qubits"]))
    report = dec.run_pipeline(cplx, graph, pattern, protected, config["decoder"])
    text = dec.report_to_json(cplx, report)
    print(text, end="")
    path = outdir / "decode.json"
    path.write_text(text, encoding="utf-8")
    return [path.name]


def _exec_sweep(config: dict, outdir: Path) -> list[str]:
    per_qubit = config.get("per_qubit")
    cfg = mc.SweepConfig(
        lattice=config["lattice"],
        protected=config["protected"],
        decoder=config["decoder"],
        p_grid=tuple(config.get("p_grid", ())),
        trials=int(config["trials"]),
        seed=int(config["seed"]),
        frame=config["frame"],
        support=config.get("support", "faces"),
        per_qubit=tuple((int(q), float(p)) for q, p in per_qubit) if per_qubit else None,
    )
    result = mc.run_sweep(cfg, threads=int(config.get("threads", 1)))
    outputs = []
    csv_path = outdir / "sweep.csv"
    csv_path.write_text(mc.to_csv(result), encoding="utf-8")
    outputs.append(csv_path.name)
    if config.get("plot_data"):
        tsv_path = outdir / "curves.tsv"
        tsv_path.write_text(mc.analytic_curves_tsv(), encoding="utf-8")
        outputs.append(tsv_path.name)
    exact = bool(config.get("exact_intervals"))
    for row in result.rows:
        line = (
            f"p={row.p:.3g} estimate={row.estimate:.6g} (+-{row.stderr:.2g}) "
            f"uncorrected={row.analytic_uncorrected:.6g} corrected={row.analytic_corrected:.6g}"
        )
        if exact:
            lo, hi = mc.binomial_interval(row.failures, row.trials)
            line += f" ci95=[{lo:.6g}, {hi:.6g}]"
        print(line)
    return outputs


def _exec_profile(config: dict, outdir: Path) -> list[str]:
    cplx, graph = mc.resolve_lattice(config["lattice"])
    protected = mc.resolve_protected(cplx, config["protected"])
    counts = mc.brute_force_profile(cplx, graph, config["decoder"], protected)
    support = mc.noise_support(graph, "faces" if config["decoder"] != "none" else "all")
    payload = {
        "decoder": config["decoder"],
        "support_qubits": list(support),
        "success_by_weight": {str(w): c for w, c in sorted(counts.items())},
        "patterns_by_weight": {
            str(w): math.comb(len(support), w) for w in sorted(counts)
        },
    }
    text = json.dumps(payload, indent=1) + "\n"
    print(text, end="")
    path = outdir / "profile.json"
    path.write_text(text, encoding="utf-8")
    return [path.name]


def _exec_witness(config: dict, outdir: Path) -> list[str]:
    flip_probs: dict[int, float] = {
        int(k): float(v) for k, v in config.get("flip_probs", {}).items()
    }
    for qubit, p in flip_probs.items():
        if not 0 <= qubit < 8:
            raise UsageError(f"witness qubit {qubit} out of range 0..7")
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"flip probability {p} outside [0, 1]")

    base = sv.prepare_lab_state()
    ensemble: list[tuple[float, sv.StateVector]] = []
    support = sorted(q for q, p in flip_probs.items() if p > 0.0)
    for mask in range(1 << len(support)):
        weight = 1.0
        flips = []
        for i, qubit in enumerate(support):
            if (mask >> i) & 1:
                weight *= flip_probs[qubit]
                flips.append(qubit)
            else:
                weight *= 1.0 - flip_probs[qubit]
        if weight == 0.0:
            continue
        ensemble.append((weight, sv.apply_pauli(base, flips, "X")))

    value = sum(w * sv.witness_value(s) for w, s in ensemble)
    decompositions = [(w, sv.witness_decomposition(s)) for w, s in ensemble]
    decomposed = sum(w * d.value for w, d in decompositions)

    def avg(attr: str, index: int) -> float:
        return sum(w * getattr(d, attr)[index] for w, d in decompositions)

    payload = {
        "frame": config["frame"],
        "flip_probs": {str(q): flip_probs[q] for q in sorted(flip_probs)},
        "witness_value": value,
        "witness_via_decomposition": decomposed,
        "fidelity_bound": sv.fidelity_bound(value),
        "m_terms": [avg("m_terms", k) for k in range(8)],
        "m_conj_terms": [avg("m_conj_terms", k) for k in range(8)],
        "n_terms": [avg("n_terms", k) for k in range(6)],
    }
    if abs(value - decomposed) > sv.ATOL:
        raise CheckFailure(
            f"witness evaluation paths disagree: {value} vs {decomposed}"
        )
    text = json.dumps(payload, indent=1) + "\n"
    print(text, end="")
    path = outdir / "witness.json"
    path.write_text(text, encoding="utf-8")
    return [path.name]


def _exec_verify(config: dict, outdir: Path) -> list[str]:
    results = run_verification(seed=int(config["seed"]))
    lines = []
    for name, ok, detail in results:
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    path = outdir / "verify.txt"
    path.write_text(text, encoding="utf-8")
    if not all(ok for _, ok, _ in results):
        raise CheckFailure("verification failures: "
                           + ", ".join(name for name, ok, _ in results if not ok))
    return [path.name]


# -- built-in verification suite ----------------------------------------------


def run_verification(seed: int = 0) -> list[tuple[str, bool, str]]:
    """Fast invariant suite; each entry is (name, passed, detail)."""
    rng = np.random.default_rng(seed)
    out: list[tuple[str, bool, str]] = []

    def check(name: str, fn: Callable[[], str]) -> None:
        try:
            out.append((name, True, fn()))
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            out.append((name, False, f"{type(exc).__name__}: {exc}"))

    def boundary_squared() -> str:
        complexes = {
            "elementary": cc.build_elementary_cell(),
            "l8": cc.build_l8(),
            "cubic_2x2x2": cc.build_cubic(2, 2, 2),
        }
        checked = 0
        for cplx in complexes.values():
            for dim in (2, 3):
                ids = cplx.dim_cells(dim)
                for _ in range(50):
                    take = rng.random(len(ids)) < 0.5
                    chain = cc.Chain(dim, frozenset(i for i, t in zip(ids, take) if t))
                    if cc.boundary(cplx, cc.boundary(cplx, chain)).support:
                        raise CheckFailure("boundary of boundary nonempty")
                    checked += 1
        return f"{checked} random chains on {len(complexes)} complexes"

    def table_match() -> str:
        rows = table1_rows()
        for name, bits in rows.items():
            if bits != _TABLE1_EXPECTED[name]:
                raise CheckFailure(f"mismatch for error {name}")
        return "all 24 syndrome bits match"

    def profile_counts() -> str:
        cplx = cc.build_l8()
        graph = gs.graph_from_complex(cplx)
        protected = cplx.chain(cc.DIM_FACE, ["f1", "f1'"])
        counts = mc.brute_force_profile(cplx, graph, "lookup_l8", protected)
        expected = {0: 1, 1: 6, 2: 9, 3: 0, 4: 9, 5: 6, 6: 1}
        if counts != expected:
            raise CheckFailure(f"profile {counts} != {expected}")
        return "success counts by weight (1, 6, 9, 0, 9, 6, 1)"

    def closed_surfaces() -> str:
        cplx = cc.build_l8()
        graph = gs.graph_from_complex(cplx)
        group = gs.stabilizer_generators(graph)
        state = sv.prepare_graph_state(graph)
        volumes = cplx.dim_cells(cc.DIM_VOLUME)
        for mask in range(1, 16):
            chain = cc.Chain(cc.DIM_VOLUME, frozenset(
                volumes[i] for i in range(4) if (mask >> i) & 1
            ))
            surface = cc.boundary(cplx, chain)
            op = gs.surface_operator(cplx, graph, surface)
            if gs.correlation(group, op) != 1:
                raise CheckFailure(f"stabilizer correlation != 1 for mask {mask}")
            if abs(sv.pauli_expectation(state, op) - 1.0) > sv.ATOL:
                raise CheckFailure(f"statevector correlation != 1 for mask {mask}")
        return "15 boundary-sum surfaces at +1 by both engines"

    def witness_suite() -> str:
        psi = sv.prepare_lab_state()
        if abs(sv.witness_value(psi) + 0.5) > sv.ATOL:
            raise CheckFailure("ideal witness != -0.5")
        for _ in range(5):
            state = sv.random_state(8, rng)
            if abs(sv.witness_value(state) - sv.witness_via_decomposition(state)) > sv.ATOL:
                raise CheckFailure("decomposition identity violated")
        if abs(sv.fidelity_bound(-0.23) - 0.73) > 1e-12:
            raise CheckFailure("fidelity bound mapping broken")
        return "ideal value -0.5, decomposition identity, bound(-0.23) = 0.73"

    def frame_equivalence() -> str:
        cplx = cc.build_l8()
        graph = gs.graph_from_complex(cplx)
        g8 = sv.prepare_graph_state(graph)
        lab = sv.prepare_lab_state()
        hadamarded = sv.apply_hadamard(g8, range(8))
        if abs(sv.fidelity(lab, hadamarded) - 1.0) > sv.ATOL:
            raise CheckFailure("lab state is not Hadamard-equivalent to the cluster state")
        return "lab state = H^x8 cluster state (fidelity 1)"

    def matching_soundness() -> str:
        cplx = cc.build_cubic(3, 3, 3, periodic=True)
        graph = gs.graph_from_complex(cplx)
        matcher = dec.CubicMatcher(cplx, graph)
        faces = graph.kind_qubits(gs.FACE)
        for q in faces:
            pattern = noise.ErrorPattern(frozenset({q}))
            syndrome = dec.extract_syndrome(cplx, graph, pattern)
            correction = matcher.decode(syndrome)
            if correction.flipped != pattern.flipped:
                raise CheckFailure(f"single error on qubit {q} not exactly recovered")
        for _ in range(50):
            idx = rng.random(len(faces)) < 0.05
            pattern = noise.ErrorPattern(frozenset(q for q, t in zip(faces, idx) if t))
            syndrome = dec.extract_syndrome(cplx, graph, pattern)
            correction = matcher.decode(syndrome)
            residual = noise.ErrorPattern(pattern.flipped ^ correction.flipped)
            if not dec.extract_syndrome(cplx, graph, residual).is_clear():
                raise CheckFailure("matching left a nonzero syndrome")
        return "single-error exactness and syndrome clearing on the 3x3x3 torus"

    check("boundary_squared_zero", boundary_squared)
    check("single_error_syndrome_table", table_match)
    check("exhaustive_success_profile", profile_counts)
    check("closed_surface_correlations", closed_surfaces)
    check("witness_suite", witness_suite)
    check("frame_equivalence", frame_equivalence)
    check("matching_soundness", matching_soundness)
    return out


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _build_parser() -> _Parser:
    # Global flags live on a shared parent so they may appear before or
    # after the subcommand; SUPPRESS keeps subparsers from clobbering
    # root-level values with defaults.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="master RNG seed")
    common.add_argument("--frame", choices=noise.FRAMES, default=argparse.SUPPRESS,
                        help="error/correlation vocabulary for outputs")
    common.add_argument("--output", default=argparse.SUPPRESS,
                        help="output directory (default: ./tecsim_out/<subcommand>)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads for sweeps")

    parser = _Parser(prog="tecsim", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_sub(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    def add_lattice_args(p):
        p.add_argument("--lattice", default="l8", choices=("l8", "elementary", "cubic"))
        p.add_argument("--dims", default=None, help="LX,LY,T for cubic lattices")
        p.add_argument("--periodic", default=None,
                       help="'all' or comma list of periodic axes (cubic only)")
        p.add_argument("--defect", action="append", default=None,
                       help="removed qubit cell label (repeatable)")

    p_build = add_sub("build", "build a lattice and write its JSON complex")
    add_lattice_args(p_build)

    add_sub("table1", "print the single-error syndrome table and check it")

    p_syn = add_sub("syndrome", "extract the syndrome of an error pattern")
    add_lattice_args(p_syn)
    p_syn.add_argument("--error", default="", help="Pauli string or comma list of qubit names/labels/ids")

    p_dec = add_sub("decode", "decode an error pattern end to end")
    add_lattice_args(p_dec)
    p_dec.add_argument("--error", default="", help="Pauli string or comma list of qubit names/labels/ids")
    p_dec.add_argument("--decoder", default="lookup_l8", choices=mc.DECODERS)
    p_dec.add_argument("--protected", default="f1,f1'",
                       help="comma list of face labels, or axis:coord for a cross section")

    p_sweep = add_sub("sweep", "Monte Carlo sweep over error probabilities")
    add_lattice_args(p_sweep)
    p_sweep.add_argument("--config", default=None, help="JSON sweep config file")
    p_sweep.add_argument("--p-grid", default="0.1:0.9:0.1",
                         help="comma list or start:stop:step")
    p_sweep.add_argument("--trials", type=int, default=100000)
    p_sweep.add_argument("--decoder", default="lookup_l8", choices=mc.DECODERS)
    p_sweep.add_argument("--protected", default="f1,f1'")
    p_sweep.add_argument("--plot-data", action="store_true",
                         help="also write fine-grained analytic curves")
    p_sweep.add_argument("--exact-intervals", action="store_true",
                         help="print exact binomial confidence intervals")

    p_prof = add_sub("profile", "exhaustive success counts by error weight")
    add_lattice_args(p_prof)
    p_prof.add_argument("--decoder", default="lookup_l8", choices=mc.DECODERS)
    p_prof.add_argument("--protected", default="f1,f1'")

    p_wit = add_sub("witness", "witness and fidelity-bound report")
    p_wit.add_argument("--flip-prob", action="append", default=None,
                       help="QUBIT:P flip probability (repeatable; qubits 0..7)")

    add_sub("verify", "run the built-in invariant suite")
    return parser


def _parse_protected(text: str) -> list[str] | dict:
    """Face list ("f1,f1'"), ';'-separated cubic labels ("f:z:0,0,0;f:z:1,0,0"),
    or a cross section ("z:0")."""
    text = text.strip()
    if text.startswith(("f:", "e:")) or ";" in text:
        return [tok.strip() for tok in text.split(";") if tok.strip()]
    if ":" in text:
        axis, _, coord = text.partition(":")
        try:
            return {"cross_section": {"axis": axis, "coord": int(coord)}}
        except ValueError:
            raise UsageError(f"bad cross-section spec {text!r}, expected AXIS:COORD") from None
    return [tok.strip().replace("′", "'") for tok in text.split(",") if tok.strip()]


def _resolve_config(args: argparse.Namespace) -> dict:
    common = {"seed": args.seed, "frame": args.frame}
    sc = args.subcommand
    if sc == "build":
        return {**common, "lattice": _parse_lattice(args)}
    if sc in ("table1", "verify"):
        return common
    if sc in ("syndrome", "decode"):
        lattice = _parse_lattice(args)
        cplx, graph = mc.resolve_lattice(lattice)
        config = {
            **common,
            "lattice": lattice,
            "error_qubits": _resolve_error_qubits(cplx, graph, args.error),
        }
        if sc == "decode":
            config["decoder"] = args.decoder
            config["protected"] = _parse_protected(args.protected)
        return config
    if sc == "sweep":
        if args.config:
            file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
            # A "noise" object uses the standard noise-spec keys:
            # scalar {"p": x} or {"per_qubit": {qubit: p}}, plus "frame".
            noise_spec = file_cfg.pop("noise", None)
            if noise_spec is not None:
                if "frame" in noise_spec:
                    file_cfg.setdefault("frame", noise_spec["frame"])
                if "p" in noise_spec:
                    file_cfg.setdefault("p_grid", [float(noise_spec["p"])])
                if "per_qubit" in noise_spec:
                    file_cfg["per_qubit"] = sorted(
                        (int(q), float(p)) for q, p in noise_spec["per_qubit"].items()
                    )
            config = {**common, **file_cfg}
        else:
            config = {
                **common,
                "lattice": _parse_lattice(args),
                "protected": _parse_protected(args.protected),
                "decoder": args.decoder,
                "p_grid": _parse_p_grid(args.p_grid),
                "trials": args.trials,
                "plot_data": bool(args.plot_data),
                "exact_intervals": bool(args.exact_intervals),
            }
        config["threads"] = args.threads
        if config.get("trials", 0) < 1:
            raise UsageError("trials must be >= 1")
        return config
    if sc == "profile":
        return {
            **common,
            "lattice": _parse_lattice(args),
            "decoder": args.decoder,
            "protected": _parse_protected(args.protected),
        }
    if sc == "witness":
        flip_probs = {}
        for item in args.flip_prob or ():
            qubit, _, p = item.partition(":")
            try:
                flip_probs[int(qubit)] = float(p)
            except ValueError:
                raise UsageError(f"bad --flip-prob {item!r}, expected QUBIT:P") from None
        return {**common, "flip_probs": flip_probs}
    raise UsageError(f"unknown subcommand {sc!r}")


_EXECUTORS = {
    "build": _exec_build,
    "table1": _exec_table1,
    "syndrome": _exec_syndrome,
    "decode": _exec_decode,
    "sweep": _exec_sweep,
    "profile": _exec_profile,
    "witness": _exec_witness,
    "verify": _exec_verify,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        # Fill in global-flag defaults (SUPPRESS leaves them unset when absent).
        args.seed = getattr(args, "seed", DEFAULT_SEED)
        args.frame = getattr(args, "frame", noise.FRAME_ABSTRACT)
        args.output = getattr(args, "output", None)
        args.threads = getattr(args, "threads", 1)
        config = _resolve_config(args)
        outdir = Path(args.output) if args.output else Path("tecsim_out") / args.subcommand
        outdir.mkdir(parents=True, exist_ok=True)
        outputs = _EXECUTORS[args.subcommand](config, outdir)
        _write_manifest(outdir, args.subcommand, config, outputs)
        return EXIT_OK
    except (
        UsageError,
        mc.ConfigError,
        cc.ComplexError,
        cc.DefectError,
        cc.InvalidChainError,
        dec.InvalidSyndromeError,
        json.JSONDecodeError,
        FileNotFoundError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - internal invariant violations
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
