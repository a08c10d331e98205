"""Classical ground truth for PQHT circuits.

Everything here is plain Boolean evaluation: which patterns a pixel vector
contains, the full expected truth table, and a bit-level evaluator for
reversible (X/CX/CCX/SWAP) circuits.  The quantum stack is validated against
these, never the other way around.

Input vectors are strings over the layout's pixel order: character ``j`` is
qubit line ``j``.  Expected detection strings have one character per pattern
in pattern order (so character ``k`` matches clbit ``k`` of an
outputs-measured circuit).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

from .circuit import GateKind, QuantumCircuit
from .hough import PatternSpec, PQHTLayout, used_pixels


def pattern_present(bits: str, pattern: PatternSpec, pixel_order: Sequence[tuple[int, int]]) -> bool:
    """True when every pixel of ``pattern`` is set in the input vector."""
    index = {pixel: j for j, pixel in enumerate(pixel_order)}
    for pixel in pattern.pixels:
        if pixel not in index:
            raise ValueError(f"pattern pixel {pixel} not in pixel order {tuple(pixel_order)}")
        if bits[index[pixel]] != "1":
            return False
    return True


@dataclass(frozen=True)
class TruthRow:
    input_bits: str
    expected: str


@dataclass(frozen=True)
class TruthTable:
    pixel_order: tuple[tuple[int, int], ...]
    pattern_names: tuple[str, ...]
    rows: tuple[TruthRow, ...]

    def detection_rows(self) -> tuple[TruthRow, ...]:
        """Rows where at least one pattern fires."""
        return tuple(r for r in self.rows if "1" in r.expected)


def full_truth_table(patterns: Sequence[PatternSpec]) -> TruthTable:
    """All ``2**k`` input vectors in ascending binary order of the vector value.

    The vector value reads character ``j`` as bit ``j`` (little-endian), so
    row 1 is "100..0" (only qubit line 0 set).
    """
    order = used_pixels(patterns)
    k = len(order)
    rows = []
    for value in range(1 << k):
        bits = "".join("1" if (value >> j) & 1 else "0" for j in range(k))
        expected = "".join(
            "1" if pattern_present(bits, p, order) else "0" for p in patterns
        )
        rows.append(TruthRow(bits, expected))
    return TruthTable(
        pixel_order=order,
        pattern_names=tuple(p.name for p in patterns),
        rows=tuple(rows),
    )


def truth_table_csv(table: TruthTable) -> str:
    """CSV with header ``input_bits,expected_output``; row order preserved."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["input_bits", "expected_output"])
    for row in table.rows:
        writer.writerow([row.input_bits, row.expected])
    return buf.getvalue()


def expected_full_bits(layout: PQHTLayout, input_bits: str) -> str:
    """Expected classical value of every qubit line after the cascades.

    Character ``q`` is qubit ``q``: inputs echo the vector, carries hold the
    running prefix-ANDs, outputs the full pattern ANDs.
    """
    if len(input_bits) != layout.num_inputs:
        raise ValueError(
            f"input vector length {len(input_bits)} != {layout.num_inputs} input lines")
    bits = [0] * layout.total_qubits
    for j, ch in enumerate(input_bits):
        bits[j] = 1 if ch == "1" else 0
    for unit in layout.units:
        lines = unit.input_qubits
        acc = bits[lines[0]] & bits[lines[1]]
        for j, carry in enumerate(unit.carries):
            bits[carry] = acc
            acc &= bits[lines[j + 2]]
        bits[unit.output] = acc
    return "".join(str(b) for b in bits)


@dataclass(frozen=True)
class ReversibleResult:
    """Final classical bit of each qubit line, plus recorded clbits."""

    bits: tuple[int, ...]
    clbits: tuple[int, ...]


def evaluate_reversible(
    circuit: QuantumCircuit, initial_bits: Sequence[int] | None = None
) -> ReversibleResult:
    """Evaluate a classical reversible circuit on definite bits.

    Only X, CX, CCX, SWAP and MEASURE are meaningful on classical states; any
    other gate raises.  This is the independent oracle for the arithmetic
    gadgets and the Toffoli cascades.
    """
    if initial_bits is None:
        bits = [0] * circuit.num_qubits
    else:
        bits = [int(b) for b in initial_bits]
        if len(bits) != circuit.num_qubits:
            raise ValueError(
                f"initial_bits length {len(bits)} != {circuit.num_qubits} qubits")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("initial_bits must be 0/1")
    clbits = [0] * circuit.num_clbits
    for pos, gate in enumerate(circuit.instructions):
        kind = gate.kind
        if kind is GateKind.X:
            q = gate.qubits[0]
            bits[q] ^= 1
        elif kind is GateKind.CX:
            c, t = gate.qubits
            bits[t] ^= bits[c]
        elif kind is GateKind.CCX:
            c1, c2, t = gate.qubits
            bits[t] ^= bits[c1] & bits[c2]
        elif kind is GateKind.SWAP:
            a, b = gate.qubits
            bits[a], bits[b] = bits[b], bits[a]
        elif kind is GateKind.MEASURE:
            clbits[gate.clbit] = bits[gate.qubits[0]]
        else:
            raise ValueError(
                f"instruction {pos} ({kind.value}) is not classical-reversible")
    return ReversibleResult(tuple(bits), tuple(clbits))
