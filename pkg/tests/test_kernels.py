"""Both kernel backends against the dense-matrix oracle, plus the env switch."""

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

import pqht._kernels_numpy as knp
from pqht import kernels
from pqht.circuit import GateKind, QuantumCircuit
from pqht.simulator import apply_gate, compile_program, gate_matrix, run_exact
from helpers import embed, random_state

try:
    import pqht._kernels_numba as knb
    BACKENDS = [("numpy", knp), ("numba", knb)]
except ImportError:  # pragma: no cover - numba is a hard dependency
    BACKENDS = [("numpy", knp)]

RNG_MATRIX = np.random.default_rng(1234)


def random_unitary_2x2(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, _ = np.linalg.qr(m)
    return q


@pytest.mark.parametrize("backend_name,mod", BACKENDS)
class TestAgainstMatrixOracle:
    def test_apply_1q(self, backend_name, mod):
        for n in range(1, 6):
            for q in range(n):
                u = random_unitary_2x2(100 * n + q)
                state = random_state(n, 7 * n + q)
                amps = state.copy()
                mod.apply_1q(amps, q, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
                want = embed(u, (q,), n) @ state
                assert np.max(np.abs(amps - want)) < 1e-12

    def test_apply_diag(self, backend_name, mod):
        for n in range(1, 6):
            for q in range(n):
                theta = float(np.random.default_rng(n + q).uniform(-8, 8))
                d = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
                state = random_state(n, 11 * n + q)
                amps = state.copy()
                mod.apply_diag(amps, q, d[0, 0], d[1, 1])
                want = embed(d, (q,), n) @ state
                assert np.max(np.abs(amps - want)) < 1e-12

    def test_apply_x(self, backend_name, mod):
        x = gate_matrix(GateKind.X)
        for n in range(1, 6):
            for q in range(n):
                state = random_state(n, 13 * n + q)
                amps = state.copy()
                mod.apply_x(amps, q)
                want = embed(x, (q,), n) @ state
                assert np.max(np.abs(amps - want)) < 1e-12

    @pytest.mark.parametrize("kind,apply_name", [
        (GateKind.CX, "apply_cx"), (GateKind.SWAP, "apply_swap"),
    ])
    def test_two_qubit(self, backend_name, mod, kind, apply_name):
        matrix = gate_matrix(kind)
        for n in range(2, 6):
            for a, b in itertools.permutations(range(n), 2):
                state = random_state(n, 17 * n + 5 * a + b)
                amps = state.copy()
                getattr(mod, apply_name)(amps, a, b)
                want = embed(matrix, (a, b), n) @ state
                assert np.max(np.abs(amps - want)) < 1e-12

    def test_apply_ccx(self, backend_name, mod):
        matrix = gate_matrix(GateKind.CCX)
        for n in range(3, 6):
            for ops in itertools.permutations(range(n), 3):
                state = random_state(n, sum(ops) + 23 * n)
                amps = state.copy()
                mod.apply_ccx(amps, *ops)
                want = embed(matrix, ops, n) @ state
                assert np.max(np.abs(amps - want)) < 1e-12

    def test_norm_preserved_per_kernel(self, backend_name, mod):
        state = random_state(5, 99)
        amps = state.copy()
        u = random_unitary_2x2(3)
        mod.apply_1q(amps, 2, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        mod.apply_diag(amps, 0, np.exp(-0.4j), np.exp(0.4j))
        mod.apply_x(amps, 4)
        mod.apply_cx(amps, 4, 1)
        mod.apply_swap(amps, 0, 3)
        mod.apply_ccx(amps, 1, 3, 2)
        assert abs(np.vdot(amps, amps).real - 1.0) < 1e-12


def random_circuit(num_qubits: int, num_gates: int, seed: int) -> QuantumCircuit:
    rng = np.random.default_rng(seed)
    circ = QuantumCircuit(num_qubits)
    kinds = [GateKind.H, GateKind.X, GateKind.SX, GateKind.RZ,
             GateKind.CX, GateKind.SWAP, GateKind.CCX]
    for _ in range(num_gates):
        kind = kinds[rng.integers(len(kinds))]
        if kind.arity > num_qubits:
            kind = GateKind.H
        ops = rng.choice(num_qubits, size=kind.arity, replace=False)
        if kind is GateKind.RZ:
            circ.rz(int(ops[0]), float(rng.uniform(-14, 14)))
        else:
            getattr(circ, kind.value)(*(int(q) for q in ops))
    return circ


class TestRunProgram:
    @pytest.mark.parametrize("backend_name,mod", BACKENDS)
    def test_matches_per_gate_dispatch(self, backend_name, mod):
        for seed in range(8):
            circ = random_circuit(4, 40, seed)
            program = compile_program(circ)
            amps = np.zeros(16, dtype=np.complex128)
            amps[0] = 1.0
            mod.run_program(amps, program.codes, program.qa, program.qb,
                            program.qc, program.angles)
            want = np.zeros(16, dtype=np.complex128)
            want[0] = 1.0
            for gate in circ.instructions:
                apply_gate(want, gate)
            assert np.max(np.abs(amps - want)) < 1e-12

    def test_backends_agree(self):
        if len(BACKENDS) < 2:
            pytest.skip("numba backend unavailable")
        for seed in range(8):
            circ = random_circuit(5, 60, 100 + seed)
            program = compile_program(circ)
            results = []
            for _, mod in BACKENDS:
                amps = np.zeros(32, dtype=np.complex128)
                amps[0] = 1.0
                mod.run_program(amps, program.codes, program.qa, program.qb,
                                program.qc, program.angles)
                results.append(amps)
            assert np.max(np.abs(results[0] - results[1])) < 1e-12

    @pytest.mark.parametrize("backend_name,mod", BACKENDS)
    def test_pauli_opcodes(self, backend_name, mod):
        paulis = {
            kernels.OPCODES["pauli_x"]: np.array([[0, 1], [1, 0]], dtype=np.complex128),
            kernels.OPCODES["pauli_y"]: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
            kernels.OPCODES["pauli_z"]: np.array([[1, 0], [0, -1]], dtype=np.complex128),
        }
        for code, matrix in paulis.items():
            for q in range(3):
                state = random_state(3, 31 * code + q)
                amps = state.copy()
                one = np.array([code], dtype=np.int64)
                mod.run_program(amps, one, np.array([q], dtype=np.int64),
                                np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64),
                                np.zeros(1, dtype=np.float64))
                want = embed(matrix, (q,), 3) @ state
                assert np.max(np.abs(amps - want)) < 1e-12

    def test_skip_opcode_is_identity(self):
        state = random_state(3, 5)
        for _, mod in BACKENDS:
            amps = state.copy()
            one = np.array([kernels.OPCODES["skip"]], dtype=np.int64)
            zeros = np.zeros(1, dtype=np.int64)
            mod.run_program(amps, one, zeros, zeros, zeros, np.zeros(1, dtype=np.float64))
            assert np.array_equal(amps, state)


class TestOpcodeTable:
    def test_compile_program_uses_table(self):
        circ = QuantumCircuit(3, 1)
        circ.h(0).x(1).sx(2).rz(0, 1.0).cx(0, 1).swap(1, 2).ccx(0, 1, 2).measure(0, 0)
        codes = compile_program(circ).codes.tolist()
        names = ["h", "x", "sx", "rz", "cx", "swap", "ccx", "skip"]
        assert codes == [kernels.OPCODES[name] for name in names]

    def test_opcodes_are_distinct(self):
        values = list(kernels.OPCODES.values())
        assert len(values) == len(set(values))


class TestBackendSelection:
    def _backend_in_subprocess(self, env_value: str) -> subprocess.CompletedProcess:
        env = dict(os.environ, PQHT_KERNELS=env_value)
        return subprocess.run(
            [sys.executable, "-c", "from pqht.kernels import BACKEND; print(BACKEND)"],
            capture_output=True, text=True, env=env,
        )

    @pytest.mark.parametrize("env_value,expected", [
        ("numpy", "numpy"), ("numba", "numba"), ("auto", None),
    ])
    def test_valid_choices(self, env_value, expected):
        proc = self._backend_in_subprocess(env_value)
        assert proc.returncode == 0, proc.stderr
        backend = proc.stdout.strip()
        if expected is None:
            assert backend in ("numpy", "numba")
        else:
            assert backend == expected

    def test_invalid_choice_fails_import(self):
        proc = self._backend_in_subprocess("cython")
        assert proc.returncode != 0
        assert "PQHT_KERNELS" in proc.stderr

    def test_numpy_backend_runs_a_circuit(self):
        env = dict(os.environ, PQHT_KERNELS="numpy")
        code = (
            "from pqht.circuit import QuantumCircuit\n"
            "from pqht.simulator import measured_probabilities\n"
            "qc = QuantumCircuit(2, 2).h(0).cx(0, 1).measure(0, 0).measure(1, 1)\n"
            "probs = measured_probabilities(qc)\n"
            "assert abs(probs['00'] - 0.5) < 1e-12 and abs(probs['11'] - 0.5) < 1e-12\n"
            "print('ok')\n"
        )
        proc = subprocess.run([sys.executable, "-c", code],
                              capture_output=True, text=True, env=env)
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.strip() == "ok"


def test_run_exact_agrees_with_dense_product():
    for seed in range(6):
        circ = random_circuit(4, 25, 300 + seed)
        state = run_exact(circ).amplitudes
        want = np.zeros(16, dtype=np.complex128)
        want[0] = 1.0
        for gate in circ.instructions:
            matrix = gate_matrix(gate.kind, gate.angle)
            want = embed(matrix, gate.qubits, 4) @ want
        assert np.max(np.abs(state - want)) < 1e-12
