"""tecsim: topological error correction on 3D cluster states.

Build cell complexes, derive cluster-state stabilizers, inject Pauli
errors, extract homological syndromes, decode them, and compare Monte
Carlo estimates against the analytic error-rate curves; plus a dense
statevector engine for witness and fidelity mathematics.
"""

from .cellcomplex import (
    Cell,
    CellComplex,
    Chain,
    boundary,
    build_cubic,
    build_elementary_cell,
    build_l8,
    cross_section,
    homologous,
    is_cycle,
    line_defect,
)
from .decoder import (
    Correction,
    CubicMatcher,
    DecodeReport,
    Syndrome,
    decode_lookup_l8,
    decode_mwpm,
    dual_parity,
    extract_syndrome,
    logical_success,
    run_pipeline,
)
from .graphstate import (
    InteractionGraph,
    PauliOp,
    StabilizerGroup,
    correlation,
    graph_from_complex,
    stabilizer_generators,
    surface_operator,
)
from .montecarlo import (
    SweepConfig,
    SweepResult,
    analytic_corrected_l8,
    analytic_uncorrected,
    brute_force_profile,
    run_sweep,
    to_csv,
    uncorrected_failure,
)
from .noise import (
    ErrorPattern,
    NoiseModel,
    beamsplitter_prob,
    sample,
    stream,
    waveplate_prob,
)
from .statevector import (
    Observable,
    StateVector,
    apply_pauli,
    ensemble_witness,
    expectation,
    fidelity,
    fidelity_bound,
    pauli_expectation,
    prepare_graph_state,
    prepare_lab_state,
    witness_partner_state,
    witness_value,
    witness_via_decomposition,
)

__version__ = "0.1.0"
