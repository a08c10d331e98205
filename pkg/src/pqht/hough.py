"""Parallel quantum Hough transform circuits over binary pixel grids.

A pixel is addressed as ``(col, row)`` with column 0 the *rightmost* image
column and row 0 the bottom row.  Each pixel used by at least one line
pattern gets a qubit line; a set pixel at column ``c`` is phase-labelled by
RZ with angle ``-(4c+1)*pi`` inside an H..H sandwich, an unset pixel by
RZ(0).  Because RZ has period ``4*pi`` exactly, later H-RZ(-4pi)-H blocks
are identities, which keeps every coincidence unit's view of the input
register intact while its Toffoli cascade runs.

One coincidence unit per pattern: a Toffoli cascade that ANDs the pattern's
pixel lines through fresh carry qubits into a fresh output qubit.  Output
qubit ``k`` answers "are all pixels of pattern ``k`` set".

Qubit layout: input lines are numbered by first appearance while scanning
patterns in order and each pattern's pixels in order; unit ``k`` then owns
carries ``n_in + 2k`` style slots assigned sequentially after the inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .circuit import GateKind, QuantumCircuit

PHASE_STEP = 4.0 * math.pi


@dataclass(frozen=True)
class PixelGrid:
    """Binary image, row-major bits with index ``row * width + col``."""

    width: int
    height: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.width}x{self.height}")
        if len(self.bits) != self.width * self.height:
            raise ValueError(
                f"grid bits length {len(self.bits)} != width*height = {self.width * self.height}"
            )
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("grid bits must be 0 or 1")

    @classmethod
    def blank(cls, width: int, height: int) -> "PixelGrid":
        return cls(width, height, (0,) * (width * height))

    @classmethod
    def with_pixels(cls, width: int, height: int, pixels: Iterable[tuple[int, int]]) -> "PixelGrid":
        bits = [0] * (width * height)
        for col, row in pixels:
            if not (0 <= col < width and 0 <= row < height):
                raise ValueError(f"pixel ({col},{row}) outside {width}x{height} grid")
            bits[row * width + col] = 1
        return cls(width, height, tuple(bits))

    def bit(self, col: int, row: int) -> int:
        if not (0 <= col < self.width and 0 <= row < self.height):
            raise ValueError(f"pixel ({col},{row}) outside {self.width}x{self.height} grid")
        return self.bits[row * self.width + col]


@dataclass(frozen=True)
class PatternSpec:
    """A line pattern: named pixel set checked by one coincidence unit.

    ``pixels`` is ordered; the Toffoli cascade consumes it in this order,
    and input qubit numbering follows first appearance across patterns.
    """

    name: str
    angle_deg: float
    pixels: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("pattern name must be non-empty")
        if len(self.pixels) < 2:
            raise ValueError(f"pattern {self.name!r} needs at least 2 pixels")
        if len(set(self.pixels)) != len(self.pixels):
            raise ValueError(f"pattern {self.name!r} has duplicate pixels")


def default_3x3_patterns() -> tuple[PatternSpec, ...]:
    """The four 3x3 line presets: vertical, two diagonal-ish, main diagonal.

    Order and pixel order fix the canonical qubit numbering q0..q5 for the
    six pixels these lines touch.
    """
    return (
        PatternSpec("B", 90.0, ((0, 0), (0, 1), (0, 2))),
        PatternSpec("C", 75.0, ((0, 0), (0, 1), (1, 2))),
        PatternSpec("D", 60.0, ((0, 0), (1, 1), (1, 2))),
        PatternSpec("A", 45.0, ((0, 0), (1, 1), (2, 2))),
    )


def phase_of_pixel(col: int, is_set: bool) -> float:
    """Phase label for a pixel at column ``col``: -(4c+1)*pi if set, else 0."""
    if col < 0:
        raise ValueError(f"column must be non-negative, got {col}")
    return -(4.0 * col + 1.0) * math.pi if is_set else 0.0


def used_pixels(patterns: Sequence[PatternSpec]) -> tuple[tuple[int, int], ...]:
    """Pixels in qubit order: first appearance scanning patterns then pixels."""
    seen: dict[tuple[int, int], None] = {}
    for pattern in patterns:
        for pixel in pattern.pixels:
            seen.setdefault(pixel, None)
    return tuple(seen)


@dataclass(frozen=True)
class CoincidenceUnit:
    pattern: PatternSpec
    input_qubits: tuple[int, ...]
    carries: tuple[int, ...]
    output: int


@dataclass(frozen=True)
class PQHTLayout:
    """Qubit assignment for one grid/pattern configuration."""

    pixel_order: tuple[tuple[int, int], ...]
    units: tuple[CoincidenceUnit, ...]
    total_qubits: int

    @property
    def num_inputs(self) -> int:
        return len(self.pixel_order)

    @property
    def input_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.num_inputs))

    @property
    def carry_qubits(self) -> tuple[int, ...]:
        return tuple(q for unit in self.units for q in unit.carries)

    @property
    def output_qubits(self) -> tuple[int, ...]:
        return tuple(unit.output for unit in self.units)

    def qubit_of_pixel(self, pixel: tuple[int, int]) -> int:
        return self.pixel_order.index(pixel)


def assign_layout(grid: PixelGrid, patterns: Sequence[PatternSpec]) -> PQHTLayout:
    """Number input, carry and output qubits for the given patterns.

    Inputs come first (first-appearance order), then each unit's carries and
    output in unit order.  A k-pixel pattern takes k-2 carries; 2-pixel
    patterns AND straight into their output.
    """
    if not patterns:
        raise ValueError("need at least one pattern")
    names = [p.name for p in patterns]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate pattern names: {sorted(names)}")
    for pattern in patterns:
        for col, row in pattern.pixels:
            if not (0 <= col < grid.width and 0 <= row < grid.height):
                raise ValueError(
                    f"pattern {pattern.name!r} references pixel ({col},{row}) "
                    f"outside {grid.width}x{grid.height} grid"
                )
    order = used_pixels(patterns)
    qubit_of = {pixel: q for q, pixel in enumerate(order)}
    next_free = len(order)
    units = []
    for pattern in patterns:
        n_carries = len(pattern.pixels) - 2
        carries = tuple(range(next_free, next_free + n_carries))
        output = next_free + n_carries
        next_free = output + 1
        units.append(
            CoincidenceUnit(
                pattern=pattern,
                input_qubits=tuple(qubit_of[p] for p in pattern.pixels),
                carries=carries,
                output=output,
            )
        )
    return PQHTLayout(pixel_order=order, units=tuple(units), total_qubits=next_free)


MEASURE_MODES = ("outputs", "all", "none")


def build_pqht(
    grid: PixelGrid,
    patterns: Sequence[PatternSpec],
    *,
    measure: str = "outputs",
) -> tuple[QuantumCircuit, PQHTLayout]:
    """Build the full PQHT circuit for ``grid`` against ``patterns``.

    Per unit: H on every input line, a rotation column, H again, then the
    unit's Toffoli cascade.  The first rotation column carries the pixel
    phase labels (RZ(0) spelled out on unset lines); every later column puts
    RZ(-4pi) on set lines only, a whole-period shift that leaves the encoded
    image unchanged.

    measure="outputs" maps unit k's output to clbit k; "all" maps qubit q to
    clbit q; "none" appends no MEASURE instructions.
    """
    if measure not in MEASURE_MODES:
        raise ValueError(f"measure must be one of {MEASURE_MODES}, got {measure!r}")
    layout = assign_layout(grid, patterns)
    if measure == "outputs":
        num_clbits = len(layout.units)
    elif measure == "all":
        num_clbits = layout.total_qubits
    else:
        num_clbits = 0
    circ = QuantumCircuit(layout.total_qubits, num_clbits)
    inputs = layout.input_qubits
    set_line = [grid.bit(*pixel) == 1 for pixel in layout.pixel_order]
    for block, unit in enumerate(layout.units):
        for q in inputs:
            circ.h(q)
        if block == 0:
            for q in inputs:
                col = layout.pixel_order[q][0]
                circ.rz(q, phase_of_pixel(col, set_line[q]))
        else:
            for q in inputs:
                if set_line[q]:
                    circ.rz(q, -PHASE_STEP)
        for q in inputs:
            circ.h(q)
        _cascade(circ, unit)
    if measure == "outputs":
        for k, unit in enumerate(layout.units):
            circ.measure(unit.output, k)
    elif measure == "all":
        for q in range(layout.total_qubits):
            circ.measure(q, q)
    return circ, layout


def _cascade(circ: QuantumCircuit, unit: CoincidenceUnit) -> None:
    """AND the unit's input lines into its output through the carry chain."""
    lines = unit.input_qubits
    if len(lines) == 2:
        circ.ccx(lines[0], lines[1], unit.output)
        return
    circ.ccx(lines[0], lines[1], unit.carries[0])
    for j in range(2, len(lines) - 1):
        circ.ccx(unit.carries[j - 2], lines[j], unit.carries[j - 1])
    circ.ccx(unit.carries[-1], lines[-1], unit.output)


# -- design rules -----------------------------------------------------------


@dataclass(frozen=True)
class RuleViolation:
    rule: str
    position: int
    description: str


@dataclass(frozen=True)
class DesignRuleReport:
    violations: tuple[RuleViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


_ANGLE_TOL = 1e-9


def _is_phase_label(angle: float) -> bool:
    """True when angle is 0 or -(4n+1)*pi for integer n >= 0."""
    k = angle / math.pi
    r = round(k)
    if abs(k - r) > _ANGLE_TOL:
        return False
    return r == 0 or (r < 0 and (-r) % 4 == 1)


def _is_whole_period(angle: float) -> bool:
    k = angle / PHASE_STEP
    return abs(k - round(k)) <= _ANGLE_TOL


def validate_design_rules(circuit: QuantumCircuit, layout: PQHTLayout) -> DesignRuleReport:
    """Check the four structural rules that make a circuit a valid PQHT.

    R1  the first RZ on each input line is a phase label: 0 or -(4n+1)*pi
    R2  every later RZ on an input line is a whole period (0 mod 4*pi)
    R3  each RZ on an input line sits directly between two H on that line
    R4  Toffolis read input/carry lines and write carry/output lines only,
        and no other unitary touches carry or output lines
    """
    inputs = set(layout.input_qubits)
    carries = set(layout.carry_qubits)
    outputs = set(layout.output_qubits)
    violations: list[RuleViolation] = []

    per_line: dict[int, list[tuple[int, GateKind, float | None]]] = {q: [] for q in inputs}
    rz_seen: set[int] = set()
    for pos, gate in enumerate(circuit.instructions):
        kind = gate.kind
        if kind is GateKind.MEASURE:
            continue
        if kind is GateKind.CCX:
            c1, c2, t = gate.qubits
            if not {c1, c2} <= inputs | carries:
                violations.append(RuleViolation(
                    "R4", pos,
                    f"ccx controls {c1},{c2} must be input or carry lines"))
            if t not in carries | outputs:
                violations.append(RuleViolation(
                    "R4", pos, f"ccx target {t} must be a carry or output line"))
            continue
        bad = [q for q in gate.qubits if q not in inputs]
        if bad:
            violations.append(RuleViolation(
                "R4", pos,
                f"{kind.value} touches non-input line(s) {bad}; only ccx may"))
        if kind is GateKind.RZ:
            q = gate.qubits[0]
            if q in inputs:
                if q not in rz_seen:
                    rz_seen.add(q)
                    if not _is_phase_label(gate.angle):
                        violations.append(RuleViolation(
                            "R1", pos,
                            f"first rz on input line {q} has angle {gate.angle!r}, "
                            "expected 0 or -(4n+1)*pi"))
                elif not _is_whole_period(gate.angle):
                    violations.append(RuleViolation(
                        "R2", pos,
                        f"repeat rz on input line {q} has angle {gate.angle!r}, "
                        "expected a multiple of 4*pi"))
        for q in gate.qubits:
            if q in inputs:
                per_line[q].append((pos, kind, gate.angle))

    for q, seq in per_line.items():
        for i, (pos, kind, _angle) in enumerate(seq):
            if kind is not GateKind.RZ:
                continue
            before_ok = i > 0 and seq[i - 1][1] is GateKind.H
            after_ok = i + 1 < len(seq) and seq[i + 1][1] is GateKind.H
            if not (before_ok and after_ok):
                violations.append(RuleViolation(
                    "R3", pos,
                    f"rz on input line {q} is not sandwiched between h gates"))

    violations.sort(key=lambda v: (v.position, v.rule))
    return DesignRuleReport(tuple(violations))


# -- text formats -----------------------------------------------------------


def parse_grid(text: str) -> PixelGrid:
    """Grid file: one row per line, top row first, '0'/'1' characters only.

    The rightmost character of each line is column 0.  Blank lines and lines
    starting with '#' are skipped.
    """
    rows = [line.strip() for line in text.splitlines()]
    rows = [r for r in rows if r and not r.startswith("#")]
    if not rows:
        raise ValueError("grid file contains no rows")
    width = len(rows[0])
    height = len(rows)
    if any(len(r) != width for r in rows):
        raise ValueError("grid rows have unequal widths")
    bad = sorted({ch for r in rows for ch in r} - {"0", "1"})
    if bad:
        raise ValueError(f"grid rows may contain only 0/1, found {bad}")
    bits = [0] * (width * height)
    for line_no, line in enumerate(rows):
        row = height - 1 - line_no
        for pos, ch in enumerate(line):
            col = width - 1 - pos
            bits[row * width + col] = 1 if ch == "1" else 0
    return PixelGrid(width, height, tuple(bits))


def parse_patterns(text: str) -> tuple[PatternSpec, ...]:
    """Pattern file: one pattern per line, ``NAME ANGLE col,row col,row ...``.

    Blank lines and '#' comments are skipped.
    """
    patterns = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 3:
            raise ValueError(
                f"pattern line {line_no}: need NAME ANGLE and at least 2 pixels, got {line!r}")
        name = parts[0]
        try:
            angle = float(parts[1])
        except ValueError as exc:
            raise ValueError(f"pattern line {line_no}: bad angle {parts[1]!r}") from exc
        pixels = []
        for token in parts[2:]:
            try:
                col_s, row_s = token.split(",")
                pixels.append((int(col_s), int(row_s)))
            except ValueError as exc:
                raise ValueError(
                    f"pattern line {line_no}: bad pixel {token!r}, expected col,row") from exc
        patterns.append(PatternSpec(name, angle, tuple(pixels)))
    if not patterns:
        raise ValueError("pattern file contains no patterns")
    return tuple(patterns)


def load_grid(path: str) -> PixelGrid:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_grid(fh.read())


def load_patterns(path: str) -> tuple[PatternSpec, ...]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_patterns(fh.read())


def grid_from_input_bits(
    width: int, height: int, pixel_order: Sequence[tuple[int, int]], bits: str
) -> PixelGrid:
    """Grid whose pixel ``pixel_order[j]`` is set iff ``bits[j] == '1'``."""
    if len(bits) != len(pixel_order):
        raise ValueError(f"bits length {len(bits)} != number of pixels {len(pixel_order)}")
    if set(bits) - {"0", "1"}:
        raise ValueError(f"bits must be 0/1, got {bits!r}")
    pixels = [pixel for pixel, b in zip(pixel_order, bits) if b == "1"]
    return PixelGrid.with_pixels(width, height, pixels)
