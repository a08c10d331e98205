"""Gate-level circuit IR: construction, validation, metrics, OpenQASM 2.0 emission.

A circuit is an ordered list of :class:`Gate` instructions over ``num_qubits``
qubit lines and ``num_clbits`` classical bits.  Append order is simulation
order is emission order.  Every append is validated eagerly so that a bad
operand is reported with the instruction position where it was introduced,
not at simulation time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator


class GateKind(Enum):
    """Supported instructions.  Values are the OpenQASM 2.0 gate names."""

    H = "h"
    X = "x"
    SX = "sx"
    RZ = "rz"
    CX = "cx"
    SWAP = "swap"
    CCX = "ccx"
    MEASURE = "measure"

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def takes_angle(self) -> bool:
        return self is GateKind.RZ


_ARITY = {
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.SX: 1,
    GateKind.RZ: 1,
    GateKind.CX: 2,
    GateKind.SWAP: 2,
    GateKind.CCX: 3,
    GateKind.MEASURE: 1,
}


@dataclass(frozen=True)
class Gate:
    """One instruction.

    ``qubits`` lists operands in gate order: controls before targets for CX
    and CCX.  ``angle`` is radians and is set exactly for RZ; ``clbit`` is
    set exactly for MEASURE.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None
    clbit: int | None = None


class QuantumCircuit:
    """Mutable gate list with chainable builder methods.

    >>> circ = QuantumCircuit(2, 1).h(0).cx(0, 1).measure(1, 0)
    """

    def __init__(self, num_qubits: int, num_clbits: int = 0) -> None:
        if not isinstance(num_qubits, int) or num_qubits < 1:
            raise ValueError(f"num_qubits must be a positive integer, got {num_qubits!r}")
        if not isinstance(num_clbits, int) or num_clbits < 0:
            raise ValueError(f"num_clbits must be a non-negative integer, got {num_clbits!r}")
        self.num_qubits = num_qubits
        self.num_clbits = num_clbits
        self.instructions: list[Gate] = []
        self._measured_clbits: set[int] = set()

    # -- construction -------------------------------------------------------

    def append(self, gate: Gate) -> "QuantumCircuit":
        self._validate(gate, position=len(self.instructions))
        if gate.kind is GateKind.MEASURE:
            self._measured_clbits.add(gate.clbit)  # type: ignore[arg-type]
        self.instructions.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "QuantumCircuit":
        for gate in gates:
            self.append(gate)
        return self

    def h(self, q: int) -> "QuantumCircuit":
        return self.append(Gate(GateKind.H, (q,)))

    def x(self, q: int) -> "QuantumCircuit":
        return self.append(Gate(GateKind.X, (q,)))

    def sx(self, q: int) -> "QuantumCircuit":
        return self.append(Gate(GateKind.SX, (q,)))

    def rz(self, q: int, angle: float) -> "QuantumCircuit":
        return self.append(Gate(GateKind.RZ, (q,), angle=float(angle)))

    def cx(self, control: int, target: int) -> "QuantumCircuit":
        return self.append(Gate(GateKind.CX, (control, target)))

    def swap(self, a: int, b: int) -> "QuantumCircuit":
        return self.append(Gate(GateKind.SWAP, (a, b)))

    def ccx(self, control1: int, control2: int, target: int) -> "QuantumCircuit":
        return self.append(Gate(GateKind.CCX, (control1, control2, target)))

    def measure(self, qubit: int, clbit: int) -> "QuantumCircuit":
        return self.append(Gate(GateKind.MEASURE, (qubit,), clbit=clbit))

    def copy(self) -> "QuantumCircuit":
        dup = QuantumCircuit(self.num_qubits, self.num_clbits)
        dup.instructions = list(self.instructions)
        dup._measured_clbits = set(self._measured_clbits)
        return dup

    # -- queries ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.instructions)

    def __repr__(self) -> str:
        return (
            f"QuantumCircuit(num_qubits={self.num_qubits}, "
            f"num_clbits={self.num_clbits}, instructions={len(self.instructions)})"
        )

    def measurements(self) -> list[tuple[int, int]]:
        """(qubit, clbit) pairs in append order."""
        return [(g.qubits[0], g.clbit) for g in self.instructions if g.kind is GateKind.MEASURE]

    # -- validation ---------------------------------------------------------

    def _validate(self, gate: Gate, position: int) -> None:
        where = f"instruction {position} ({gate.kind.value})"
        if not isinstance(gate, Gate):
            raise ValueError(f"{where}: expected a Gate, got {type(gate).__name__}")
        if len(gate.qubits) != gate.kind.arity:
            raise ValueError(
                f"{where}: takes {gate.kind.arity} qubit operand(s), got {len(gate.qubits)}"
            )
        for q in gate.qubits:
            if not isinstance(q, int) or not (0 <= q < self.num_qubits):
                raise ValueError(
                    f"{where}: qubit {q!r} out of range for {self.num_qubits} qubits"
                )
        if len(set(gate.qubits)) != len(gate.qubits):
            raise ValueError(f"{where}: duplicate qubit operands {gate.qubits}")
        if gate.kind.takes_angle:
            if gate.angle is None or not math.isfinite(gate.angle):
                raise ValueError(f"{where}: requires a finite angle, got {gate.angle!r}")
        elif gate.angle is not None:
            raise ValueError(f"{where}: does not take an angle")
        if gate.kind is GateKind.MEASURE:
            if gate.clbit is None or not (0 <= gate.clbit < self.num_clbits):
                raise ValueError(
                    f"{where}: clbit {gate.clbit!r} out of range for {self.num_clbits} clbits"
                )
            if gate.clbit in self._measured_clbits:
                raise ValueError(f"{where}: clbit {gate.clbit} already written by a MEASURE")
        elif gate.clbit is not None:
            raise ValueError(f"{where}: does not take a clbit")


@dataclass(frozen=True)
class CircuitMetrics:
    depth: int
    gate_counts: dict[str, int]
    two_qubit_count: int
    num_qubits: int
    num_clbits: int


def metrics(circuit: QuantumCircuit) -> CircuitMetrics:
    """Depth and gate counts.

    Depth is the length of the longest dependency chain where each
    instruction depends on the latest prior instruction touching any of its
    qubits (or, for MEASURE, its clbit).  Deterministic for a fixed circuit.
    """
    qubit_front = [0] * circuit.num_qubits
    clbit_front = [0] * circuit.num_clbits
    counts: dict[str, int] = {}
    two_q = 0
    for gate in circuit.instructions:
        counts[gate.kind.value] = counts.get(gate.kind.value, 0) + 1
        if gate.kind.arity == 2:
            two_q += 1
        level = max(qubit_front[q] for q in gate.qubits)
        if gate.kind is GateKind.MEASURE:
            level = max(level, clbit_front[gate.clbit])
        level += 1
        for q in gate.qubits:
            qubit_front[q] = level
        if gate.kind is GateKind.MEASURE:
            clbit_front[gate.clbit] = level
    depth = max(qubit_front + clbit_front, default=0)
    return CircuitMetrics(
        depth=depth,
        gate_counts=counts,
        two_qubit_count=two_q,
        num_qubits=circuit.num_qubits,
        num_clbits=circuit.num_clbits,
    )


def to_openqasm(circuit: QuantumCircuit) -> str:
    """Emit OpenQASM 2.0.

    Angles are printed with repr-faithful precision (``%.17g``) so a
    round-trip through text preserves the exact float.
    """
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    if circuit.num_clbits > 0:
        lines.append(f"creg c[{circuit.num_clbits}];")
    for gate in circuit.instructions:
        if gate.kind is GateKind.MEASURE:
            lines.append(f"measure q[{gate.qubits[0]}] -> c[{gate.clbit}];")
        elif gate.kind is GateKind.RZ:
            lines.append(f"rz({gate.angle:.17g}) q[{gate.qubits[0]}];")
        else:
            operands = ",".join(f"q[{q}]" for q in gate.qubits)
            lines.append(f"{gate.kind.value} {operands};")
    return "\n".join(lines) + "\n"
