"""Stochastic Pauli trajectory noise with asymmetric readout error.

Model: after each unitary gate, every operand independently suffers a
uniformly random Pauli in {X, Y, Z} with probability ``p1`` (1-qubit gates)
or ``p2`` (each operand of 2- and 3-qubit gates).  Measured bits are then
flipped 0->1 with probability ``r01`` and 1->0 with ``r10``.

Determinism scheme: shot ``i`` draws its own randomness from
``default_rng(seed + i)`` in a fixed order (error uniforms over all operand
slots, then Pauli picks for the hits, then readout uniforms), while the
*outcome* of shot ``i`` consumes the i-th variate of ``default_rng(seed)``,
the same stream the ideal sampler uses.  With all params zero every
trajectory is the ideal circuit and the histogram is bit-for-bit identical
to ``sample_shots(circuit, shots, seed)``.

Trajectories that share an error pattern share a distribution, so the
distributions are memoized by error signature; at realistic error rates
most shots are error-free and reuse one cached table.  The memo is keyed
by circuit content and kept across calls (a few circuits deep), so noise
parameter sweeps over one circuit replay each error pattern only once.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .circuit import GateKind, QuantumCircuit
from .simulator import (
    DEFAULT_QUBIT_LIMIT,
    DENSE_SAMPLE_LIMIT,
    Program,
    ResourceLimitError,
    ShotHistogram,
    _marginal_vector,
    check_terminal_measures,
    compile_program,
    measured_qubits_in_clbit_order,
    run_program,
    sample_shots,
)


@dataclass(frozen=True)
class NoiseParams:
    """Depolarizing strengths per gate class plus readout flip rates."""

    p1: float = 0.0
    p2: float = 0.0
    r01: float = 0.0
    r10: float = 0.0

    def __post_init__(self) -> None:
        for field_name in ("p1", "p2", "r01", "r10"):
            value = getattr(self, field_name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{field_name} must be in [0,1], got {value!r}")

    @property
    def is_zero(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0 and self.r01 == 0.0 and self.r10 == 0.0


def _error_slots(circuit: QuantumCircuit, params: NoiseParams) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Operand slots that can take an error, with their probabilities.

    One slot per operand of every unitary instruction, in instruction order.
    Slots are enumerated even at probability zero so the per-shot random
    stream does not depend on the parameter values.
    """
    slots: list[tuple[int, int]] = []
    probs: list[float] = []
    for pos, gate in enumerate(circuit.instructions):
        if gate.kind is GateKind.MEASURE:
            continue
        p = params.p1 if gate.kind.arity == 1 else params.p2
        for slot in range(gate.kind.arity):
            slots.append((pos, slot))
            probs.append(p)
    return slots, np.asarray(probs, dtype=np.float64)


_PAULI_X_CODE = 8  # run_program opcodes 8/9/10 = Pauli X/Y/Z

# signature -> cumulative distribution, grouped by circuit digest; a plain
# dict is insertion-ordered, oldest circuit is evicted past the cap
_DIST_CACHE_MAX_CIRCUITS = 4
_dist_cache: dict[bytes, dict[tuple[tuple[int, int, int], ...], np.ndarray]] = {}


def _circuit_digest(base: Program, num_qubits: int, order: tuple[int, ...]) -> bytes:
    h = hashlib.sha1()
    h.update(np.array((num_qubits,) + order, dtype=np.int64).tobytes())
    for arr in (base.codes, base.qa, base.qb, base.qc, base.angles):
        h.update(arr.tobytes())
    return h.digest()


def _distributions_for(base: Program, num_qubits: int, order: tuple[int, ...]):
    digest = _circuit_digest(base, num_qubits, order)
    table = _dist_cache.get(digest)
    if table is None:
        while len(_dist_cache) >= _DIST_CACHE_MAX_CIRCUITS:
            del _dist_cache[next(iter(_dist_cache))]
        table = _dist_cache[digest] = {}
    return table


def _spliced_program(
    base: Program, circuit: QuantumCircuit, signature: tuple[tuple[int, int, int], ...]
) -> Program:
    """Insert the signature's Pauli errors right after their instructions."""
    where = np.array([pos + 1 for pos, _, _ in signature], dtype=np.int64)
    codes = np.insert(base.codes, where,
                      [_PAULI_X_CODE + pauli for _, _, pauli in signature])
    qa = np.insert(base.qa, where,
                   [circuit.instructions[pos].qubits[slot] for pos, slot, _ in signature])
    zeros = np.zeros(len(signature), dtype=np.int64)
    return Program(
        codes=codes,
        qa=qa,
        qb=np.insert(base.qb, where, zeros),
        qc=np.insert(base.qc, where, zeros),
        angles=np.insert(base.angles, where, np.zeros(len(signature))),
    )


def _trajectory_distribution(
    program: Program, num_qubits: int, order: tuple[int, ...]
) -> np.ndarray:
    """Cumulative outcome distribution over the measured qubits for one
    error trajectory."""
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    run_program(amps, program)
    marg = _marginal_vector(amps, order, num_qubits)
    return np.cumsum(marg)


def sample_noisy_shots(
    circuit: QuantumCircuit,
    params: NoiseParams,
    shots: int,
    seed: int,
    *,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> ShotHistogram:
    """Sample ``shots`` noisy trajectories of ``circuit``.

    Deterministic for fixed (circuit, params, shots, seed); see the module
    docstring for the exact stream layout.
    """
    if not isinstance(params, NoiseParams):
        params = NoiseParams(*params)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if params.is_zero:
        # Zero noise degenerates to the ideal sampler: the outcome uniforms
        # are the same stream, so the histograms match exactly.
        return sample_shots(circuit, shots, seed, qubit_limit=qubit_limit)
    if circuit.num_qubits > qubit_limit:
        raise ResourceLimitError(
            f"circuit has {circuit.num_qubits} qubits; dense simulation is "
            f"limited to {qubit_limit} (raise qubit_limit to override)")
    check_terminal_measures(circuit)
    order = measured_qubits_in_clbit_order(circuit)
    m = len(order)
    if m > DENSE_SAMPLE_LIMIT:
        raise ValueError(
            f"noisy sampling tabulates 2**m outcome entries; m={m} exceeds "
            f"the supported {DENSE_SAMPLE_LIMIT} measured bits")
    slots, slot_probs = _error_slots(circuit, params)
    num_slots = len(slots)
    base = compile_program(circuit)
    outcome_us = np.random.default_rng(seed).random(shots)
    dist_cache = _distributions_for(base, circuit.num_qubits, order)
    counts: dict[str, int] = {}
    for i in range(shots):
        shot_rng = np.random.default_rng(seed + i)
        error_us = shot_rng.random(num_slots)
        hits = np.flatnonzero(error_us < slot_probs)
        if hits.size:
            paulis = shot_rng.integers(0, 3, size=hits.size)
            signature = tuple(
                (slots[j][0], slots[j][1], int(p)) for j, p in zip(hits, paulis)
            )
        else:
            signature = ()
        readout_us = shot_rng.random(m)
        cdf = dist_cache.get(signature)
        if cdf is None:
            program = _spliced_program(base, circuit, signature) if signature else base
            cdf = _trajectory_distribution(program, circuit.num_qubits, order)
            dist_cache[signature] = cdf
        outcome = min(
            int(np.searchsorted(cdf, outcome_us[i], side="right")), (1 << m) - 1
        )
        chars = []
        for j in range(m):
            bit = (outcome >> (m - 1 - j)) & 1
            if bit == 0 and readout_us[j] < params.r01:
                bit = 1
            elif bit == 1 and readout_us[j] < params.r10:
                bit = 0
            chars.append("1" if bit else "0")
        key = "".join(chars)
        counts[key] = counts.get(key, 0) + 1
    return ShotHistogram(counts=counts, shots=shots, seed=seed)


def certainty(histogram: ShotHistogram, expected: str) -> float:
    """Fraction of shots that landed exactly on ``expected``."""
    if not histogram.counts:
        raise ValueError("histogram is empty")
    width = histogram.num_bits
    if len(expected) != width:
        raise ValueError(
            f"expected bitstring has length {len(expected)}, histogram bits are {width}")
    return histogram.counts.get(expected, 0) / histogram.shots
