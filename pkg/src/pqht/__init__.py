"""Parallel quantum Hough transform toolkit.

Build PQHT circuits from pixel grids and line patterns, verify them
exhaustively on an exact statevector engine, study them under stochastic
Pauli noise, and lower them to a constrained hardware basis and topology.
"""

from .arith import (
    AdderLayout,
    ComparatorLayout,
    GadgetCheck,
    ThresholdLayout,
    build_adder3,
    build_comparator_lt,
    build_threshold_unit,
    verify_gadgets,
)
from .circuit import (
    CircuitMetrics,
    Gate,
    GateKind,
    QuantumCircuit,
    metrics,
    to_openqasm,
)
from .hough import (
    CoincidenceUnit,
    DesignRuleReport,
    PatternSpec,
    PixelGrid,
    PQHTLayout,
    RuleViolation,
    assign_layout,
    build_pqht,
    default_3x3_patterns,
    grid_from_input_bits,
    load_grid,
    load_patterns,
    parse_grid,
    parse_patterns,
    phase_of_pixel,
    used_pixels,
    validate_design_rules,
)
from .noise import NoiseParams, certainty, sample_noisy_shots
from .oracle import (
    ReversibleResult,
    TruthRow,
    TruthTable,
    evaluate_reversible,
    expected_full_bits,
    full_truth_table,
    pattern_present,
    truth_table_csv,
)
from .simulator import (
    DEFAULT_QUBIT_LIMIT,
    ResourceLimitError,
    ShotHistogram,
    StateVector,
    bits_from_int,
    gate_matrix,
    int_from_bits,
    iter_states,
    measured_probabilities,
    probabilities,
    run_exact,
    sample_shots,
)
from .transpile import (
    CouplingMap,
    LayoutMapping,
    TranspileReport,
    compact_circuit,
    decompose_to_basis,
    expand_swaps,
    fully_connected,
    heavy_hex_27,
    linear_chain,
    respects_coupling,
    route,
    verify_equivalence,
)

__version__ = "0.1.0"

__all__ = [
    "AdderLayout",
    "CircuitMetrics",
    "CoincidenceUnit",
    "ComparatorLayout",
    "CouplingMap",
    "DEFAULT_QUBIT_LIMIT",
    "DesignRuleReport",
    "GadgetCheck",
    "Gate",
    "GateKind",
    "LayoutMapping",
    "NoiseParams",
    "PQHTLayout",
    "PatternSpec",
    "PixelGrid",
    "QuantumCircuit",
    "ResourceLimitError",
    "ReversibleResult",
    "RuleViolation",
    "ShotHistogram",
    "StateVector",
    "ThresholdLayout",
    "TranspileReport",
    "TruthRow",
    "TruthTable",
    "assign_layout",
    "bits_from_int",
    "build_adder3",
    "build_comparator_lt",
    "build_pqht",
    "build_threshold_unit",
    "certainty",
    "compact_circuit",
    "decompose_to_basis",
    "default_3x3_patterns",
    "evaluate_reversible",
    "expand_swaps",
    "expected_full_bits",
    "full_truth_table",
    "fully_connected",
    "gate_matrix",
    "grid_from_input_bits",
    "heavy_hex_27",
    "int_from_bits",
    "iter_states",
    "linear_chain",
    "load_grid",
    "load_patterns",
    "measured_probabilities",
    "metrics",
    "parse_grid",
    "parse_patterns",
    "pattern_present",
    "phase_of_pixel",
    "probabilities",
    "respects_coupling",
    "route",
    "run_exact",
    "sample_shots",
    "sample_noisy_shots",
    "to_openqasm",
    "truth_table_csv",
    "used_pixels",
    "validate_design_rules",
    "verify_equivalence",
    "verify_gadgets",
]
