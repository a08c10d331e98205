"""Shared test utilities.

The dense-operator helpers here are deliberately independent of the kernel
code paths: ``embed`` builds full matrices index-by-index from the documented
bit conventions, and ``unitary_of`` extracts a circuit's matrix column by
column through basis-state preparation.  Tests compare the fast kernels
against these slow-but-obvious constructions.
"""

from __future__ import annotations

import numpy as np

from pqht.circuit import QuantumCircuit
from pqht.simulator import run_exact


def random_state(num_qubits: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(1 << num_qubits) + 1j * rng.standard_normal(1 << num_qubits)
    return amps / np.linalg.norm(amps)


def embed(matrix: np.ndarray, operands: tuple[int, ...], num_qubits: int) -> np.ndarray:
    """Full 2**n operator applying ``matrix`` to ``operands``.

    Operand 0 is the least significant bit of the gate-local index; qubit q
    is bit q of the global index.  Built entry by entry, no kron tricks.
    """
    dim = 1 << num_qubits
    k = len(operands)
    full = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        local_in = 0
        for b, q in enumerate(operands):
            local_in |= ((col >> q) & 1) << b
        rest = col
        for q in operands:
            rest &= ~(1 << q)
        for local_out in range(1 << k):
            row = rest
            for b, q in enumerate(operands):
                row |= ((local_out >> b) & 1) << q
            full[row, col] = matrix[local_out, local_in]
    return full


def unitary_of(circuit: QuantumCircuit) -> np.ndarray:
    """Matrix of a measurement-free circuit, one basis column at a time."""
    n = circuit.num_qubits
    dim = 1 << n
    cols = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        prep = QuantumCircuit(n, circuit.num_clbits)
        for q in range(n):
            if (col >> q) & 1:
                prep.x(q)
        prep.extend(circuit.instructions)
        cols[:, col] = run_exact(prep).amplitudes
    return cols


def phase_equal(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    """True when u == e^{i phi} v for a single global phase phi."""
    idx = np.unravel_index(int(np.argmax(np.abs(v))), v.shape)
    if abs(u[idx]) < tol:
        return False
    phase = u[idx] / v[idx]
    return bool(np.allclose(u, phase * v, atol=tol))


def total_variation(a: dict[str, float], b: dict[str, float]) -> float:
    keys = set(a) | set(b)
    return 0.5 * sum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys)
