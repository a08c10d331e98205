"""Exact dense statevector simulation and seeded shot sampling.

Bit-order conventions (all other modules defer to these):

* Amplitude indexing is little-endian: qubit ``q`` is bit ``q`` of the
  amplitude index, so ``|q1 q0> = |01>`` means qubit 0 is 1 and lives at
  index 1.
* Printed bitstrings put the *first listed* qubit (equivalently classical
  bit 0) leftmost.  ``probabilities(state, (3, 1))`` keys its dict with
  ``"<q3><q1>"``; a shot histogram over clbits 0..3 keys with
  ``"<c0><c1><c2><c3>"``.
* ``bits_from_int(v, k)`` follows the same rule: character ``j`` is bit
  ``j`` of ``v`` (LSB first), so the integer 1 over 4 bits prints "1000".

Gate matrices follow the amplitude convention: operand 0 of a gate is the
least significant bit of the gate-local index, so CX = diag-permutation
exchanging local indices 1 and 3 (control = operand 0 = bit 0).

MEASURE is terminal-only: once a MEASURE appears, every later instruction
must also be a MEASURE.  ``run_exact`` ignores the measures and returns the
pre-measurement state; sampling draws from it without collapsing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .circuit import Gate, GateKind, QuantumCircuit

DEFAULT_QUBIT_LIMIT = 26

# Marginal distributions up to this many measured bits are tabulated densely
# (2**m floats); beyond it, sampling falls back to per-shot draws from the
# full-state distribution.
DENSE_SAMPLE_LIMIT = 20

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class ResourceLimitError(RuntimeError):
    """Raised when a circuit exceeds the configured dense-simulation budget."""


@dataclass
class StateVector:
    """Dense amplitudes, length ``2**num_qubits``."""

    amplitudes: np.ndarray

    @property
    def num_qubits(self) -> int:
        return int(self.amplitudes.shape[0]).bit_length() - 1

    def norm_squared(self) -> float:
        return float(np.real(np.vdot(self.amplitudes, self.amplitudes)))


@dataclass(frozen=True)
class ShotHistogram:
    """Counts per measured bitstring (clbit 0 leftmost)."""

    counts: dict[str, int]
    shots: int
    seed: int

    @property
    def num_bits(self) -> int:
        return len(next(iter(self.counts)))


def bits_from_int(value: int, width: int) -> str:
    """Little-endian rendering: character ``j`` is bit ``j`` of ``value``."""
    return "".join("1" if (value >> j) & 1 else "0" for j in range(width))


def int_from_bits(bits: str) -> int:
    return sum(1 << j for j, ch in enumerate(bits) if ch == "1")


def gate_matrix(kind: GateKind, angle: float | None = None) -> np.ndarray:
    """Unitary for one gate kind, local operand 0 = least significant bit."""
    if kind is GateKind.H:
        return np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=np.complex128)
    if kind is GateKind.X:
        return np.array([[0, 1], [1, 0]], dtype=np.complex128)
    if kind is GateKind.SX:
        return 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=np.complex128)
    if kind is GateKind.RZ:
        if angle is None:
            raise ValueError("RZ requires an angle")
        return np.array(
            [[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=np.complex128
        )
    if kind is GateKind.CX:
        m = np.eye(4, dtype=np.complex128)
        m[[1, 3]] = m[[3, 1]]
        return m
    if kind is GateKind.SWAP:
        m = np.eye(4, dtype=np.complex128)
        m[[1, 2]] = m[[2, 1]]
        return m
    if kind is GateKind.CCX:
        m = np.eye(8, dtype=np.complex128)
        m[[3, 7]] = m[[7, 3]]
        return m
    raise ValueError(f"{kind.value} has no unitary matrix")


def apply_gate(amps: np.ndarray, gate: Gate) -> None:
    """Dispatch one unitary instruction to the selected kernel backend."""
    kind = gate.kind
    if kind is GateKind.H:
        kernels.apply_1q(amps, gate.qubits[0], _INV_SQRT2 + 0j, _INV_SQRT2 + 0j,
                         _INV_SQRT2 + 0j, -_INV_SQRT2 + 0j)
    elif kind is GateKind.RZ:
        half = 0.5 * gate.angle  # type: ignore[operator]
        kernels.apply_diag(amps, gate.qubits[0],
                           complex(math.cos(half), -math.sin(half)),
                           complex(math.cos(half), math.sin(half)))
    elif kind is GateKind.X:
        kernels.apply_x(amps, gate.qubits[0])
    elif kind is GateKind.SX:
        kernels.apply_1q(amps, gate.qubits[0], 0.5 + 0.5j, 0.5 - 0.5j,
                         0.5 - 0.5j, 0.5 + 0.5j)
    elif kind is GateKind.CX:
        kernels.apply_cx(amps, gate.qubits[0], gate.qubits[1])
    elif kind is GateKind.SWAP:
        kernels.apply_swap(amps, gate.qubits[0], gate.qubits[1])
    elif kind is GateKind.CCX:
        kernels.apply_ccx(amps, gate.qubits[0], gate.qubits[1], gate.qubits[2])
    elif kind is GateKind.MEASURE:
        raise ValueError("MEASURE is not a unitary instruction")
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown gate kind {kind!r}")


@dataclass(frozen=True)
class Program:
    """Circuit instructions encoded as flat arrays for kernels.run_program."""

    codes: np.ndarray
    qa: np.ndarray
    qb: np.ndarray
    qc: np.ndarray
    angles: np.ndarray


def compile_program(circuit: QuantumCircuit) -> Program:
    """Encode instructions once so a full replay is a single kernel call.

    MEASUREs become no-op placeholders to keep instruction positions stable
    (trajectory error insertion addresses instructions by position).
    """
    n = len(circuit.instructions)
    codes = np.zeros(n, dtype=np.int64)
    qa = np.zeros(n, dtype=np.int64)
    qb = np.zeros(n, dtype=np.int64)
    qc = np.zeros(n, dtype=np.int64)
    angles = np.zeros(n, dtype=np.float64)
    for i, gate in enumerate(circuit.instructions):
        codes[i] = kernels.OPCODES[gate.kind.value] if gate.kind is not GateKind.MEASURE \
            else kernels.OPCODES["skip"]
        ops = gate.qubits
        qa[i] = ops[0]
        if len(ops) > 1:
            qb[i] = ops[1]
        if len(ops) > 2:
            qc[i] = ops[2]
        if gate.angle is not None:
            angles[i] = gate.angle
    return Program(codes, qa, qb, qc, angles)


def run_program(amps: np.ndarray, program: Program) -> None:
    kernels.run_program(amps, program.codes, program.qa, program.qb,
                        program.qc, program.angles)


def check_terminal_measures(circuit: QuantumCircuit) -> None:
    """Reject mid-circuit measurement: MEASUREs must form a suffix."""
    seen_measure = False
    for pos, gate in enumerate(circuit.instructions):
        if gate.kind is GateKind.MEASURE:
            seen_measure = True
        elif seen_measure:
            raise ValueError(
                f"instruction {pos} ({gate.kind.value}): mid-circuit measurement is "
                "not supported; MEASURE instructions must come last"
            )


def _check_limit(circuit: QuantumCircuit, qubit_limit: int) -> None:
    if circuit.num_qubits > qubit_limit:
        raise ResourceLimitError(
            f"circuit has {circuit.num_qubits} qubits; dense simulation is "
            f"limited to {qubit_limit} (raise qubit_limit to override)"
        )


def run_exact(circuit: QuantumCircuit, *, qubit_limit: int = DEFAULT_QUBIT_LIMIT) -> StateVector:
    """Final statevector from |0...0>.  MEASURE suffix is ignored.

    Raises ResourceLimitError above ``qubit_limit`` qubits and ValueError for
    mid-circuit measurement.  The returned state keeps norm 1 up to floating
    roundoff; a drifted norm indicates a kernel bug, so it is checked here.
    """
    _check_limit(circuit, qubit_limit)
    check_terminal_measures(circuit)
    amps = np.zeros(1 << circuit.num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    run_program(amps, compile_program(circuit))
    state = StateVector(amps)
    norm = state.norm_squared()
    if abs(norm - 1.0) > 1e-9:
        raise RuntimeError(f"statevector norm drifted to {norm!r}")
    return state


def iter_states(
    circuit: QuantumCircuit, *, qubit_limit: int = DEFAULT_QUBIT_LIMIT
) -> Iterator[tuple[int, StateVector]]:
    """Yield (instruction index, state after it) for each unitary instruction.

    The yielded StateVector wraps the live buffer; copy before mutating.
    """
    _check_limit(circuit, qubit_limit)
    check_terminal_measures(circuit)
    amps = np.zeros(1 << circuit.num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    for pos, gate in enumerate(circuit.instructions):
        if gate.kind is GateKind.MEASURE:
            continue
        apply_gate(amps, gate)
        yield pos, StateVector(amps)


def probabilities(state: StateVector, qubits: Sequence[int]) -> dict[str, float]:
    """Marginal outcome distribution over ``qubits`` in the listed order.

    Keys are bitstrings with ``qubits[0]`` leftmost; entries with exactly
    zero probability are omitted.
    """
    n = state.num_qubits
    qubits = tuple(qubits)
    for q in qubits:
        if not (0 <= q < n):
            raise ValueError(f"qubit {q} out of range for {n}-qubit state")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubits in {qubits}")
    if not qubits:
        return {"": 1.0}
    probs = _marginal_vector(state.amplitudes, qubits, n)
    m = len(qubits)
    # The marginal index has qubits[0] as its MSB, so a plain binary render
    # already puts the first listed qubit leftmost.
    return {format(idx, f"0{m}b"): float(p) for idx, p in enumerate(probs) if p != 0.0}


def _marginal_vector(amps: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Probability vector over the listed qubits; index MSB = qubits[0]."""
    probs = np.abs(amps) ** 2
    grid = probs.reshape([2] * n)
    # numpy axis for qubit q is n-1-q (axis 0 varies slowest = highest bit)
    keep = [n - 1 - q for q in qubits]
    rest = [ax for ax in range(n) if ax not in set(keep)]
    flat = grid.transpose(keep + rest).reshape(1 << len(qubits), -1)
    return flat.sum(axis=1)


def measured_probabilities(
    circuit: QuantumCircuit, *, qubit_limit: int = DEFAULT_QUBIT_LIMIT
) -> dict[str, float]:
    """Exact outcome distribution over the circuit's MEASURE targets.

    Keys are clbit-ordered bitstrings (clbit 0 leftmost), matching the keys
    of sampled histograms.
    """
    order = measured_qubits_in_clbit_order(circuit)
    state = run_exact(circuit, qubit_limit=qubit_limit)
    return probabilities(state, order)


def measured_qubits_in_clbit_order(circuit: QuantumCircuit) -> tuple[int, ...]:
    measures = circuit.measurements()
    if not measures:
        raise ValueError("circuit has no MEASURE instructions")
    by_clbit = sorted(measures, key=lambda qc: qc[1])
    return tuple(q for q, _ in by_clbit)


def sample_shots(
    circuit: QuantumCircuit,
    shots: int,
    seed: int,
    *,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> ShotHistogram:
    """Draw ``shots`` outcomes from the exact pre-measurement distribution.

    Shot ``i`` consumes the ``i``-th variate of ``default_rng(seed)``, so a
    fixed (circuit, shots, seed) triple reproduces the histogram exactly.
    Up to DENSE_SAMPLE_LIMIT measured bits the marginal distribution is
    tabulated once and inverted per shot; past that, shots are drawn from
    the full-state distribution and projected per shot.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    order = measured_qubits_in_clbit_order(circuit)
    state = run_exact(circuit, qubit_limit=qubit_limit)
    us = np.random.default_rng(seed).random(shots)
    m = len(order)
    counts: dict[str, int] = {}
    if m <= DENSE_SAMPLE_LIMIT:
        cdf = np.cumsum(_marginal_vector(state.amplitudes, order, state.num_qubits))
        idx = np.minimum(np.searchsorted(cdf, us, side="right"), (1 << m) - 1)
        binned = np.bincount(idx, minlength=1 << m)
        for outcome, c in enumerate(binned):
            if c:
                counts[format(outcome, f"0{m}b")] = int(c)
    else:
        cdf = np.cumsum(np.abs(state.amplitudes) ** 2)
        full = np.minimum(np.searchsorted(cdf, us, side="right"), cdf.shape[0] - 1)
        for basis in full:
            key = "".join("1" if (int(basis) >> q) & 1 else "0" for q in order)
            counts[key] = counts.get(key, 0) + 1
    return ShotHistogram(counts=counts, shots=shots, seed=seed)
