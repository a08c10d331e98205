"""Reversible arithmetic gadgets: ripple adder, comparator, popcount threshold.

These are the building blocks for richer pattern voting than plain AND
cascades: tally votes with adders, then compare against a threshold.  All
gadgets use classical reversible gates only (X/CX/CCX), preserve their data
inputs, and return every internal ancilla to |0>, so they can be dropped
into a larger circuit and verified with the classical oracle as well as the
statevector simulator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .circuit import QuantumCircuit


@dataclass(frozen=True)
class AdderLayout:
    """3-bit ripple adder registers.  After the circuit, ``b`` holds
    (a + b + carry_in) mod 8, ``carry_out`` is XORed with the carry, and
    ``a``/``carry_in`` are restored."""

    a: tuple[int, int, int]
    b: tuple[int, int, int]
    carry_in: int
    carry_out: int
    total_qubits: int


def _maj(circ: QuantumCircuit, c: int, b: int, a: int) -> None:
    circ.cx(a, b).cx(a, c).ccx(c, b, a)


def _uma(circ: QuantumCircuit, c: int, b: int, a: int) -> None:
    circ.ccx(c, b, a).cx(a, c).cx(c, b)


def build_adder3() -> tuple[QuantumCircuit, AdderLayout]:
    """In-place ripple-carry adder on two 3-bit registers (MAJ/UMA chain)."""
    layout = AdderLayout(a=(0, 1, 2), b=(3, 4, 5), carry_in=6, carry_out=7, total_qubits=8)
    circ = QuantumCircuit(layout.total_qubits)
    a, b = layout.a, layout.b
    _maj(circ, layout.carry_in, b[0], a[0])
    _maj(circ, a[0], b[1], a[1])
    _maj(circ, a[1], b[2], a[2])
    circ.cx(a[2], layout.carry_out)
    _uma(circ, a[1], b[2], a[2])
    _uma(circ, a[0], b[1], a[1])
    _uma(circ, layout.carry_in, b[0], a[0])
    return circ, layout


@dataclass(frozen=True)
class ComparatorLayout:
    """2-bit A<B comparator registers.  ``result`` is XORed with [A < B];
    ``a``, ``b`` and the ancilla come back unchanged (ancilla must be |0>)."""

    a: tuple[int, int]
    b: tuple[int, int]
    result: int
    ancilla: int
    total_qubits: int


def build_comparator_lt() -> tuple[QuantumCircuit, ComparatorLayout]:
    """Strict 2-bit less-than: result ^= (A < B).

    A < B splits into two mutually exclusive cases, high bit strictly less
    or high bits equal and low bit strictly less, so XORing both terms into
    the result computes their OR.
    """
    layout = ComparatorLayout(a=(0, 1), b=(2, 3), result=4, ancilla=5, total_qubits=6)
    circ = QuantumCircuit(layout.total_qubits)
    a0, a1 = layout.a
    b0, b1 = layout.b
    res, anc = layout.result, layout.ancilla
    circ.x(a1)
    circ.ccx(a1, b1, res)        # ~a1 & b1
    circ.cx(b1, a1)              # a1 line now holds [a1 == b1]
    circ.x(a0)
    circ.ccx(a0, b0, anc)        # ~a0 & b0
    circ.ccx(a1, anc, res)       # equal highs and low strictly less
    circ.ccx(a0, b0, anc)        # uncompute
    circ.x(a0)
    circ.cx(b1, a1)
    circ.x(a1)
    return circ, layout


@dataclass(frozen=True)
class ThresholdLayout:
    """Popcount-threshold registers.  ``result`` ends as [popcount(inputs)
    >= threshold]; inputs are preserved and every other line ends |0>."""

    inputs: tuple[int, ...]
    count: tuple[int, ...]
    result: int
    threshold: int
    total_qubits: int


class _Alloc:
    """Fresh-qubit allocator used while laying out the counter tree."""

    def __init__(self, start: int) -> None:
        self.next_free = start

    def take(self) -> int:
        q = self.next_free
        self.next_free += 1
        return q


def build_threshold_unit(n: int, threshold: int) -> tuple[QuantumCircuit, ThresholdLayout]:
    """Flag whether at least ``threshold`` of ``n`` input lines are set.

    A carry-save counter tree of half/full adders (sources are never
    overwritten) produces the popcount register; an unrolled less-than
    compare against the constant threshold sets the flag; then the whole
    tree and constant are uncomputed so only ``result`` differs from |0>.
    Supports 3 <= n <= 7, 1 <= threshold <= n.
    """
    if not (3 <= n <= 7):
        raise ValueError(f"n must be in 3..7, got {n}")
    if not (1 <= threshold <= n):
        raise ValueError(f"threshold must be in 1..{n}, got {threshold}")
    width = n.bit_length()
    inputs = tuple(range(n))
    alloc = _Alloc(n)
    # Gates recorded here are replayed in reverse to uncompute; X/CX/CCX are
    # all self-inverse so reversal of the list is exact.
    tape: list[tuple] = []

    def x(q: int) -> None:
        tape.append(("x", q))

    def cx(c: int, t: int) -> None:
        tape.append(("cx", c, t))

    def ccx(c1: int, c2: int, t: int) -> None:
        tape.append(("ccx", c1, c2, t))

    def full_add(x0: int, x1: int, x2: int) -> tuple[int, int]:
        s, c = alloc.take(), alloc.take()
        cx(x0, s), cx(x1, s), cx(x2, s)
        ccx(x0, x1, c), ccx(x0, x2, c), ccx(x1, x2, c)
        return s, c

    def half_add(x0: int, x1: int) -> tuple[int, int]:
        s, c = alloc.take(), alloc.take()
        cx(x0, s), cx(x1, s)
        ccx(x0, x1, c)
        return s, c

    # Counter tree: reduce each weight level to a single bit.
    levels: list[list[int]] = [list(inputs)]
    level = 0
    while level < len(levels):
        while len(levels[level]) > 1:
            bucket = levels[level]
            if len(levels) == level + 1:
                levels.append([])
            if len(bucket) >= 3:
                s, c = full_add(bucket[0], bucket[1], bucket[2])
                levels[level] = bucket[3:] + [s]
            else:
                s, c = half_add(bucket[0], bucket[1])
                levels[level] = bucket[2:] + [s]
            levels[level + 1].append(c)
        level += 1
    count = []
    for level in range(width):
        if level < len(levels) and levels[level]:
            count.append(levels[level][0])
        else:
            count.append(alloc.take())  # constant-zero count bit
    count_t = tuple(count)

    # Constant register holding the threshold.
    treg = tuple(alloc.take() for _ in range(width))
    for j, q in enumerate(treg):
        if (threshold >> j) & 1:
            x(q)

    # Strict less-than count < threshold, most significant bit down, as
    # mutually exclusive terms: (equal above i) & ~count_i & t_i.
    for q in count_t:
        x(q)  # count lines now hold ~count_i
    eq = {}
    for i in range(width - 1, 0, -1):
        e = alloc.take()
        cx(count_t[i], e)
        cx(treg[i], e)  # e = ~count_i ^ t_i = [count_i == t_i]
        eq[i] = e
    prefix: dict[int, int] = {}
    if width >= 2:
        prefix[width - 2] = eq[width - 1]
    for i in range(width - 3, -1, -1):
        p = alloc.take()
        ccx(prefix[i + 1], eq[i + 1], p)
        prefix[i] = p
    terms = []
    for i in range(width - 1, -1, -1):
        t = alloc.take()
        if i == width - 1:
            ccx(count_t[i], treg[i], t)
        else:
            u = alloc.take()
            ccx(count_t[i], treg[i], u)
            ccx(prefix[i], u, t)
            # u is uncomputed by the tape reversal
        terms.append(t)

    result = alloc.take()
    layout = ThresholdLayout(
        inputs=inputs,
        count=count_t,
        result=result,
        threshold=threshold,
        total_qubits=alloc.next_free,
    )
    circ = QuantumCircuit(layout.total_qubits)

    def play(entry: tuple) -> None:
        if entry[0] == "x":
            circ.x(entry[1])
        elif entry[0] == "cx":
            circ.cx(entry[1], entry[2])
        else:
            circ.ccx(entry[1], entry[2], entry[3])

    for entry in tape:
        play(entry)
    for t in terms:
        circ.cx(t, result)  # XOR of exclusive terms = OR: count < threshold
    circ.x(result)  # flip to count >= threshold
    for entry in reversed(tape):
        play(entry)
    return circ, layout


# -- exhaustive verification --------------------------------------------------


@dataclass(frozen=True)
class GadgetCheck:
    name: str
    cases: int
    passed: bool
    counterexample: str | None


Mutator = Callable[[str, QuantumCircuit], QuantumCircuit]


def verify_gadgets(mutate: Mutator | None = None) -> list[GadgetCheck]:
    """Exhaustively check every gadget against classical evaluation.

    All gadgets are built from classical reversible gates, so full coverage
    is a plain bit-level sweep: 64 adder pairs, 16 comparator pairs, and
    every (n, threshold, input) combination for the threshold unit,
    including its equivalence with a bare Toffoli maxfinder at n=threshold=3.
    ``mutate`` (name, circuit) -> circuit lets tests inject a fault and see
    the counterexample reporting trip.
    """
    from .oracle import evaluate_reversible

    def build(name: str, circuit: QuantumCircuit) -> QuantumCircuit:
        return mutate(name, circuit) if mutate is not None else circuit

    checks: list[GadgetCheck] = []

    circ, lay = build_adder3()
    circ = build("adder3", circ)
    failure = None
    cases = 0
    for a in range(8):
        for b in range(8):
            cases += 1
            bits = [0] * lay.total_qubits
            for j in range(3):
                bits[lay.a[j]] = (a >> j) & 1
                bits[lay.b[j]] = (b >> j) & 1
            out = evaluate_reversible(circ, bits).bits
            got_sum = sum(out[lay.b[j]] << j for j in range(3))
            got_a = sum(out[lay.a[j]] << j for j in range(3))
            ok = (
                got_sum == (a + b) % 8
                and out[lay.carry_out] == (a + b) // 8
                and got_a == a
                and out[lay.carry_in] == 0
            )
            if not ok and failure is None:
                failure = f"a={a} b={b}: got sum={got_sum} carry={out[lay.carry_out]}"
    checks.append(GadgetCheck("adder3", cases, failure is None, failure))

    circ, clay = build_comparator_lt()
    circ = build("comparator_lt", circ)
    failure = None
    cases = 0
    for a in range(4):
        for b in range(4):
            cases += 1
            bits = [0] * clay.total_qubits
            for j in range(2):
                bits[clay.a[j]] = (a >> j) & 1
                bits[clay.b[j]] = (b >> j) & 1
            out = evaluate_reversible(circ, bits).bits
            restored = (
                sum(out[clay.a[j]] << j for j in range(2)) == a
                and sum(out[clay.b[j]] << j for j in range(2)) == b
                and out[clay.ancilla] == 0
            )
            if (out[clay.result] != int(a < b) or not restored) and failure is None:
                failure = f"a={a} b={b}: got result={out[clay.result]} restored={restored}"
    checks.append(GadgetCheck("comparator_lt", cases, failure is None, failure))

    failure = None
    cases = 0
    for n in range(3, 8):
        for threshold in range(1, n + 1):
            circ, tlay = build_threshold_unit(n, threshold)
            circ = build(f"threshold_{n}_{threshold}", circ)
            for vec in range(1 << n):
                cases += 1
                bits = [0] * tlay.total_qubits
                for j in range(n):
                    bits[j] = (vec >> j) & 1
                out = evaluate_reversible(circ, bits).bits
                want = int(bin(vec).count("1") >= threshold)
                clean = all(
                    out[q] == ((vec >> q) & 1 if q < n else 0)
                    for q in range(tlay.total_qubits)
                    if q != tlay.result
                )
                if (out[tlay.result] != want or not clean) and failure is None:
                    failure = (
                        f"n={n} threshold={threshold} input={vec:0{n}b}: "
                        f"got {out[tlay.result]} want {want} clean={clean}")
    checks.append(GadgetCheck("threshold_unit", cases, failure is None, failure))

    # threshold(3,3) must agree with the plain Toffoli maxfinder (AND of 3).
    circ, tlay = build_threshold_unit(3, 3)
    circ = build("threshold_vs_maxfinder", circ)
    failure = None
    cases = 0
    for vec in range(8):
        cases += 1
        bits = [0] * tlay.total_qubits
        for j in range(3):
            bits[j] = (vec >> j) & 1
        out = evaluate_reversible(circ, bits).bits
        maxfinder = QuantumCircuit(5)
        mbits = [(vec >> 0) & 1, (vec >> 1) & 1, (vec >> 2) & 1, 0, 0]
        maxfinder.ccx(0, 1, 3).ccx(3, 2, 4)
        mout = evaluate_reversible(maxfinder, mbits).bits
        if out[tlay.result] != mout[4] and failure is None:
            failure = f"input={vec:03b}: threshold={out[tlay.result]} maxfinder={mout[4]}"
    checks.append(GadgetCheck("threshold_vs_maxfinder", cases, failure is None, failure))
    return checks
