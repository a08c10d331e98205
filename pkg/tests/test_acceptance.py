"""Acceptance gate: the end-to-end guarantees this package ships under.

Every test here drives one guarantee at its stated tolerance and records a
PASS/FAIL line that pytest prints in its terminal summary, so a full run
doubles as the sign-off report:

1. ideal coverage        every input vector detects exactly its patterns
2. routed coverage       detection survives lowering + heavy-hex routing
3. gadget exhaustives    arithmetic gadgets verified over all operand values
4. rotation label rule   set-pixel labels detect, whole periods pass
5. shift invariance      extra whole-period blocks change no output
6. noise ordering        certainty degrades monotonically with noise
7. kernel fidelity       fast kernels match dense matrices, norm is stable
"""

import time

import numpy as np

from conftest import record_acceptance
from helpers import embed, total_variation
from pqht.arith import verify_gadgets
from pqht.circuit import GateKind, QuantumCircuit
from pqht.hough import build_pqht, grid_from_input_bits
from pqht.noise import NoiseParams, certainty, sample_noisy_shots
from pqht.simulator import (
    gate_matrix,
    iter_states,
    measured_probabilities,
    run_exact,
    sample_shots,
)
from pqht.transpile import compact_circuit, decompose_to_basis, heavy_hex_27, route


class Verdict:
    """Context manager that records one PASS/FAIL summary line."""

    def __init__(self, label: str):
        self.label = label
        self.text = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "FAIL" if exc_type else "PASS"
        line = f"{status} {self.label}"
        if self.text:
            line += f": {self.text}"
        record_acceptance(line)
        return False


def build_vector_circuit(patterns, pixel_order, bits, measure="outputs"):
    grid = grid_from_input_bits(3, 3, pixel_order, bits)
    circuit, _ = build_pqht(grid, patterns, measure=measure)
    return circuit


def random_circuit(num_qubits, num_gates, rng):
    circuit = QuantumCircuit(num_qubits)
    for _ in range(num_gates):
        max_arity = 3 if num_qubits >= 3 else 2
        arity = int(rng.integers(1, max_arity + 1))
        if arity == 1:
            name = ("h", "x", "sx", "rz")[rng.integers(4)]
            q = int(rng.integers(num_qubits))
            if name == "rz":
                circuit.rz(q, float(rng.uniform(-2 * np.pi, 2 * np.pi)))
            else:
                getattr(circuit, name)(q)
        elif arity == 2:
            a, b = rng.choice(num_qubits, size=2, replace=False)
            if rng.integers(2):
                circuit.cx(int(a), int(b))
            else:
                circuit.swap(int(a), int(b))
        else:
            a, b, c = rng.choice(num_qubits, size=3, replace=False)
            circuit.ccx(int(a), int(b), int(c))
    return circuit


def test_every_vector_detects_exactly_its_patterns(patterns, pixel_order, truth_table):
    with Verdict("ideal coverage (64 vectors, tol 1e-9, under 10s)") as verdict:
        start = time.perf_counter()
        worst = 0.0
        for row in truth_table.rows:
            circuit = build_vector_circuit(patterns, pixel_order, row.input_bits)
            probs = measured_probabilities(circuit)
            worst = max(worst, abs(probs.get(row.expected, 0.0) - 1.0))
        elapsed = time.perf_counter() - start
        verdict.text = f"64/64 exact, max |P(expected)-1| {worst:.2e}, {elapsed:.2f}s"
        assert worst <= 1e-9
        assert elapsed < 10.0


def test_routing_preserves_every_detection(patterns, pixel_order, truth_table):
    with Verdict("routed coverage (heavy-hex-27, seeds 1-20, 64 vectors)") as verdict:
        coupling = heavy_hex_27()
        prepared = []
        for row in truth_table.rows:
            circuit = build_vector_circuit(patterns, pixel_order, row.input_bits)
            prepared.append(
                (row, decompose_to_basis(circuit), measured_probabilities(circuit))
            )
        max_tv = 0.0
        for seed in range(1, 21):
            for row, basis, ideal in prepared:
                routed, _, _ = route(basis, coupling, seed)
                small, _ = compact_circuit(routed)
                probs = measured_probabilities(small)
                assert max(probs, key=probs.get) == row.expected, (seed, row.input_bits)
                tv = total_variation(ideal, probs)
                max_tv = max(max_tv, tv)
                assert tv < 1e-9, (seed, row.input_bits, tv)
        verdict.text = f"1280/1280 exact argmax, max TV {max_tv:.2e}"


def test_gadget_exhaustives_all_pass():
    with Verdict("gadget exhaustives (adder, comparator, threshold-as-maxfinder)") as verdict:
        checks = {check.name: check for check in verify_gadgets()}
        adder = checks["adder3"]
        comparator = checks["comparator_lt"]
        maxfinder = checks["threshold_vs_maxfinder"]
        assert adder.passed and adder.cases == 64, adder.counterexample
        assert comparator.passed and comparator.cases == 16, comparator.counterexample
        assert maxfinder.passed and maxfinder.cases == 8, maxfinder.counterexample
        assert checks["threshold_unit"].passed, checks["threshold_unit"].counterexample
        verdict.text = "adder3 64/64, comparator_lt 16/16, threshold(3,3) vs maxfinder 8/8"


def test_rotation_label_rule_is_exact():
    with Verdict("rotation label rule (tol 1e-12)") as verdict:
        worst = 0.0
        for theta in (-np.pi, -5 * np.pi, -9 * np.pi, -13 * np.pi):
            circuit = QuantumCircuit(1, 1).h(0).rz(0, theta).h(0).measure(0, 0)
            probs = measured_probabilities(circuit)
            worst = max(worst, abs(probs.get("1", 0.0) - 1.0))
        for theta in (0.0, 4 * np.pi, -4 * np.pi, 8 * np.pi, -8 * np.pi):
            circuit = QuantumCircuit(1, 1).h(0).rz(0, theta).h(0).measure(0, 0)
            probs = measured_probabilities(circuit)
            worst = max(worst, abs(probs.get("0", 0.0) - 1.0))
        verdict.text = (
            f"detect at -pi,-5pi,-9pi,-13pi; pass at 0,+-4pi,+-8pi; max err {worst:.2e}"
        )
        assert worst <= 1e-12


def test_whole_period_blocks_shift_no_output(patterns, pixel_order, truth_table):
    with Verdict("shift invariance (k in -2..2, every line, 64 vectors, tol 1e-9)") as verdict:
        worst = 0.0
        for row in truth_table.rows:
            circuit = build_vector_circuit(patterns, pixel_order, row.input_bits)
            baseline = measured_probabilities(circuit)
            cut = next(
                pos for pos, gate in enumerate(circuit.instructions)
                if gate.kind is GateKind.CCX
            )
            for line in range(circuit.num_qubits):
                for k in (-2, -1, 0, 1, 2):
                    shifted = QuantumCircuit(circuit.num_qubits, circuit.num_clbits)
                    shifted.extend(circuit.instructions[:cut])
                    shifted.h(line).rz(line, 4.0 * np.pi * k).h(line)
                    shifted.extend(circuit.instructions[cut:])
                    probs = measured_probabilities(shifted)
                    keys = set(baseline) | set(probs)
                    worst = max(
                        worst,
                        max(abs(baseline.get(key, 0.0) - probs.get(key, 0.0)) for key in keys),
                    )
        verdict.text = f"max output probability shift {worst:.2e}"
        assert worst <= 1e-9


def test_noise_degrades_certainty_monotonically(patterns, pixel_order, truth_table):
    p2_sweep = (0.0, 0.005, 0.01, 0.02)
    shots = 19999
    with Verdict("noise ordering (19999 shots, 19 detection rows)") as verdict:
        detection = [
            (index, row)
            for index, row in enumerate(truth_table.rows)
            if "1" in row.expected
        ]
        assert len(detection) == 19
        ideal_sum = 0.0
        noisy_sums = dict.fromkeys(p2_sweep, 0.0)
        for index, row in detection:
            circuit = build_vector_circuit(patterns, pixel_order, row.input_bits)
            seed = 7 + index
            ideal_sum += certainty(sample_shots(circuit, shots, seed), row.expected)
            for p2 in p2_sweep:
                params = NoiseParams(p1=0.001, p2=p2, r01=0.02, r10=0.02)
                histogram = sample_noisy_shots(circuit, params, shots, seed)
                noisy_sums[p2] += certainty(histogram, row.expected)
        ideal_mean = ideal_sum / len(detection)
        means = [noisy_sums[p2] / len(detection) for p2 in p2_sweep]
        inversions = sum(1 for a, b in zip(means, means[1:]) if b > a)
        verdict.text = (
            f"ideal mean {ideal_mean:.4f} > noisy {means[p2_sweep.index(0.01)]:.4f}; "
            f"p2 sweep {[round(m, 4) for m in means]}, {inversions} inversion(s)"
        )
        assert ideal_mean > means[p2_sweep.index(0.01)]
        assert inversions <= 1, means


def test_kernels_match_dense_matrices(patterns, pixel_order):
    with Verdict("kernel fidelity (dense oracle tol 1e-12, per-gate norm drift)") as verdict:
        rng = np.random.default_rng(505)
        worst = 0.0
        for _ in range(10):
            n = int(rng.integers(2, 6))
            circuit = random_circuit(n, int(rng.integers(8, 24)), rng)
            state = run_exact(circuit).amplitudes
            dense = np.zeros(1 << n, dtype=np.complex128)
            dense[0] = 1.0
            for gate in circuit.instructions:
                dense = embed(gate_matrix(gate.kind, gate.angle), gate.qubits, n) @ dense
            worst = max(worst, float(np.max(np.abs(state - dense))))
        assert worst < 1e-12
        # the all-ones vector builds the deepest cascade in the family
        deepest = build_vector_circuit(patterns, pixel_order, "111111")
        drift = 0.0
        for _, state in iter_states(deepest):
            drift = max(drift, abs(float(np.linalg.norm(state.amplitudes)) - 1.0))
        verdict.text = f"max amplitude error {worst:.2e}, max norm drift {drift:.2e}"
        assert drift < 1e-12
