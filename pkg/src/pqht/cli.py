"""Command-line harness: coverage runs, certainty sweeps, QASM export.

Subcommands
    coverage          exhaustive truth-table verification on the chosen engine
    sweep             per-pattern certainty table (ideal vs noisy engines)
    export-qasm       one OpenQASM 2.0 file per input vector plus a manifest
    gadgets           exhaustive arithmetic-gadget checks
    transpile-report  basis+routing cost metrics for one input vector

Options may come from a plain ``key=value`` config file (``--config``);
explicit flags override file values.  All randomness is seeded: a run with
the same config and seed writes byte-identical reports.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .arith import verify_gadgets
from .circuit import QuantumCircuit, metrics, to_openqasm
from .hough import (
    MEASURE_MODES,
    PatternSpec,
    PixelGrid,
    build_pqht,
    default_3x3_patterns,
    grid_from_input_bits,
    load_grid,
    load_patterns,
    used_pixels,
)
from .noise import NoiseParams, certainty, sample_noisy_shots
from .oracle import expected_full_bits, full_truth_table
from .simulator import sample_shots
from .transpile import (
    COUPLING_PRESETS,
    compact_circuit,
    decompose_to_basis,
    expand_swaps,
    route,
)

ENGINES = ("ideal", "noisy")
COUPLINGS = ("none",) + tuple(COUPLING_PRESETS)
FORMATS = ("csv", "json")

DEFAULT_SHOTS = 2048
DEFAULT_SEED = 7


class ConfigError(Exception):
    """Bad flag/config-file value; maps to exit code 2."""


@dataclass
class RunConfig:
    grid: PixelGrid | None = None
    patterns: tuple[PatternSpec, ...] = field(default_factory=default_3x3_patterns)
    engine: str = "ideal"
    noise: NoiseParams | None = None
    coupling: str = "none"
    shots: int = DEFAULT_SHOTS
    seed: int = DEFAULT_SEED
    measure: str = "outputs"
    out_dir: str = "pqht-out"
    fmt: str = "csv"
    grid_path: str | None = None
    patterns_path: str | None = None

    @property
    def grid_dims(self) -> tuple[int, int]:
        if self.grid is not None:
            return (self.grid.width, self.grid.height)
        return (3, 3)

    def echo(self) -> dict:
        """Resolved settings for report provenance (deterministic)."""
        noise = None
        if self.noise is not None:
            noise = {"p1": self.noise.p1, "p2": self.noise.p2,
                     "r01": self.noise.r01, "r10": self.noise.r10}
        return {
            "grid": self.grid_path or "3x3 blank",
            "patterns": self.patterns_path or "3x3 preset",
            "engine": self.engine,
            "noise": noise,
            "coupling": self.coupling,
            "shots": self.shots,
            "seed": self.seed,
            "measure": self.measure,
            "format": self.fmt,
        }


_CONFIG_KEYS = (
    "grid", "patterns", "engine", "p1", "p2", "r01", "r10",
    "coupling", "shots", "seed", "measure", "out", "format",
)


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults < config file < explicit flags, then validate."""
    merged: dict[str, str] = {}
    if getattr(args, "config", None):
        merged.update(_read_config_file(args.config))
    flag_of = {
        "grid": "grid", "patterns": "patterns", "engine": "engine",
        "p1": "p1", "p2": "p2", "r01": "r01", "r10": "r10",
        "coupling": "coupling", "shots": "shots", "seed": "seed",
        "measure": "measure", "out": "out", "format": "format",
    }
    for key, attr in flag_of.items():
        value = getattr(args, attr, None)
        if value is not None:
            merged[key] = str(value)

    def parse_int(key: str, fallback: int) -> int:
        if key not in merged:
            return fallback
        try:
            return int(merged[key])
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {merged[key]!r}") from exc

    def parse_float(key: str) -> float | None:
        if key not in merged:
            return None
        try:
            return float(merged[key])
        except ValueError as exc:
            raise ConfigError(f"{key} must be a number, got {merged[key]!r}") from exc

    engine = merged.get("engine", "ideal")
    if engine not in ENGINES:
        raise ConfigError(f"engine must be one of {ENGINES}, got {engine!r}")
    coupling = merged.get("coupling", "none")
    if coupling not in COUPLINGS:
        raise ConfigError(f"coupling must be one of {COUPLINGS}, got {coupling!r}")
    measure = merged.get("measure", "outputs")
    if measure not in MEASURE_MODES[:2]:
        raise ConfigError(f"measure must be one of {MEASURE_MODES[:2]}, got {measure!r}")
    fmt = merged.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}, got {fmt!r}")
    shots = parse_int("shots", DEFAULT_SHOTS)
    if shots < 1:
        raise ConfigError(f"shots must be >= 1, got {shots}")
    seed = parse_int("seed", DEFAULT_SEED)

    noise_values = {k: parse_float(k) for k in ("p1", "p2", "r01", "r10")}
    any_noise = any(v is not None for v in noise_values.values())
    if engine == "noisy" and not any_noise:
        raise ConfigError("engine=noisy requires at least one of p1/p2/r01/r10")
    if engine == "ideal" and any_noise:
        raise ConfigError("noise parameters are only valid with engine=noisy")
    noise = None
    if any_noise:
        try:
            noise = NoiseParams(**{k: (v or 0.0) for k, v in noise_values.items()})
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    grid = None
    grid_path = merged.get("grid")
    if grid_path:
        try:
            grid = load_grid(grid_path)
        except ValueError as exc:
            raise ConfigError(f"grid file {grid_path}: {exc}") from exc
    patterns_path = merged.get("patterns")
    if patterns_path:
        try:
            patterns = load_patterns(patterns_path)
        except ValueError as exc:
            raise ConfigError(f"pattern file {patterns_path}: {exc}") from exc
    else:
        patterns = default_3x3_patterns()

    return RunConfig(
        grid=grid,
        patterns=patterns,
        engine=engine,
        noise=noise,
        coupling=coupling,
        shots=shots,
        seed=seed,
        measure=measure,
        out_dir=merged.get("out", "pqht-out"),
        fmt=fmt,
        grid_path=grid_path,
        patterns_path=patterns_path,
    )


# -- shared pipeline ----------------------------------------------------------


def _prepare(config: RunConfig, input_bits: str) -> tuple[QuantumCircuit, str]:
    """Build, optionally lower, and compact the circuit for one vector.

    Returns the runnable circuit and the expected output channel for the
    configured measure mode.
    """
    width, height = config.grid_dims
    order = used_pixels(config.patterns)
    grid = grid_from_input_bits(width, height, order, input_bits)
    circuit, layout = build_pqht(grid, config.patterns, measure=config.measure)
    if config.measure == "outputs":
        expected = "".join(
            "1" if all(grid.bit(*px) for px in p.pixels) else "0"
            for p in config.patterns
        )
    else:
        expected = expected_full_bits(layout, input_bits)
    if config.coupling != "none":
        coupling = COUPLING_PRESETS[config.coupling]()
        basis = decompose_to_basis(circuit)
        routed, _, _ = route(basis, coupling, config.seed)
        circuit, _ = compact_circuit(routed)
    return circuit, expected


def _run_histogram(config: RunConfig, circuit: QuantumCircuit, row_seed: int):
    if config.engine == "noisy":
        return sample_noisy_shots(circuit, config.noise, config.shots, row_seed)
    return sample_shots(circuit, config.shots, row_seed)


def _argmax(counts: dict[str, int]) -> str:
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# -- coverage -----------------------------------------------------------------


@dataclass(frozen=True)
class CoverageRecord:
    input_bits: str
    expected: str
    argmax: str
    certainty: float
    passed: bool


@dataclass(frozen=True)
class CoverageResult:
    records: tuple[CoverageRecord, ...]
    pass_count: int
    fail_inputs: tuple[str, ...]

    @property
    def all_passed(self) -> bool:
        return self.pass_count == len(self.records)


def run_coverage(config: RunConfig) -> CoverageResult:
    """One sampled run per truth-table row; pass = argmax channel matches."""
    table = full_truth_table(config.patterns)
    records = []
    for index, row in enumerate(table.rows):
        circuit, expected = _prepare(config, row.input_bits)
        histogram = _run_histogram(config, circuit, config.seed + index)
        record = CoverageRecord(
            input_bits=row.input_bits,
            expected=expected,
            argmax=_argmax(histogram.counts),
            certainty=certainty(histogram, expected),
            passed=_argmax(histogram.counts) == expected,
        )
        records.append(record)
    fails = tuple(r.input_bits for r in records if not r.passed)
    return CoverageResult(tuple(records), len(records) - len(fails), fails)


def _coverage_csv(result: CoverageResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["input_bits", "expected", "argmax", "certainty", "pass"])
    for r in result.records:
        writer.writerow([r.input_bits, r.expected, r.argmax, repr(r.certainty), int(r.passed)])
    return buf.getvalue()


def cmd_coverage(config: RunConfig, _args: argparse.Namespace) -> int:
    result = run_coverage(config)
    os.makedirs(config.out_dir, exist_ok=True)
    _write_text(os.path.join(config.out_dir, "coverage.csv"), _coverage_csv(result))
    payload = {
        "config": config.echo(),
        "rows": [
            {"input_bits": r.input_bits, "expected": r.expected, "argmax": r.argmax,
             "certainty": r.certainty, "pass": r.passed}
            for r in result.records
        ],
        "pass_count": result.pass_count,
        "total": len(result.records),
        "fail_inputs": list(result.fail_inputs),
    }
    _write_text(os.path.join(config.out_dir, "coverage.json"), _json_dumps(payload))
    print(f"coverage: {result.pass_count}/{len(result.records)} vectors pass "
          f"(engine={config.engine}, coupling={config.coupling})")
    for bits in result.fail_inputs[:10]:
        print(f"  FAIL {bits}")
    return 0 if result.all_passed else 1


# -- sweep --------------------------------------------------------------------


def run_sweep(config: RunConfig, targets: tuple[str, ...]) -> list[tuple[str, str, str, float]]:
    """(target, input_bits, engine, certainty) rows for vectors containing
    each target pattern.  The ideal engine is always reported; the noisy
    engine is added when configured, sharing the per-row seed."""
    table = full_truth_table(config.patterns)
    names = [p.name for p in config.patterns]
    rows: list[tuple[str, str, str, float]] = []
    for target in targets:
        k = names.index(target)
        for index, row in enumerate(table.rows):
            if row.expected[k] != "1":
                continue
            circuit, expected = _prepare(config, row.input_bits)
            ideal = sample_shots(circuit, config.shots, config.seed + index)
            rows.append((target, row.input_bits, "ideal", certainty(ideal, expected)))
            if config.engine == "noisy":
                noisy = sample_noisy_shots(circuit, config.noise, config.shots, config.seed + index)
                rows.append((target, row.input_bits, "noisy", certainty(noisy, expected)))
    return rows


def cmd_sweep(config: RunConfig, args: argparse.Namespace) -> int:
    names = [p.name for p in config.patterns]
    if args.targets:
        targets = tuple(t.strip() for t in args.targets.split(",") if t.strip())
        unknown = [t for t in targets if t not in names]
        if unknown:
            raise ConfigError(f"unknown pattern target(s) {unknown}; have {names}")
    else:
        targets = tuple(names)
    rows = run_sweep(config, targets)
    os.makedirs(config.out_dir, exist_ok=True)
    if config.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["target", "input_bits", "engine", "certainty"])
        for target, bits, engine, cert in rows:
            writer.writerow([target, bits, engine, repr(cert)])
        _write_text(os.path.join(config.out_dir, "sweep.csv"), buf.getvalue())
    else:
        payload = {
            "config": config.echo(),
            "rows": [
                {"target": t, "input_bits": b, "engine": e, "certainty": c}
                for t, b, e, c in rows
            ],
        }
        _write_text(os.path.join(config.out_dir, "sweep.json"), _json_dumps(payload))
    print(f"sweep: {len(rows)} rows over targets {','.join(targets)}")
    return 0


# -- export-qasm --------------------------------------------------------------


def cmd_export_qasm(config: RunConfig, _args: argparse.Namespace) -> int:
    table = full_truth_table(config.patterns)
    width, height = config.grid_dims
    order = used_pixels(config.patterns)
    os.makedirs(config.out_dir, exist_ok=True)
    entries = []
    for row in table.rows:
        grid = grid_from_input_bits(width, height, order, row.input_bits)
        circuit, layout = build_pqht(grid, config.patterns, measure=config.measure)
        expected = (
            row.expected if config.measure == "outputs"
            else expected_full_bits(layout, row.input_bits)
        )
        if config.coupling != "none":
            coupling = COUPLING_PRESETS[config.coupling]()
            basis = decompose_to_basis(circuit)
            routed, _, _ = route(basis, coupling, config.seed)
            circuit = expand_swaps(routed)
        filename = f"pqht_{row.input_bits}.qasm"
        _write_text(os.path.join(config.out_dir, filename), to_openqasm(circuit))
        entries.append({"file": filename, "input_bits": row.input_bits, "expected": expected})
    manifest = {
        "tool": "pqht",
        "version": __version__,
        "config": config.echo(),
        "circuits": entries,
    }
    _write_text(os.path.join(config.out_dir, "manifest.json"), _json_dumps(manifest))
    print(f"export-qasm: wrote {len(entries)} circuits + manifest to {config.out_dir}")
    return 0


# -- gadgets ------------------------------------------------------------------


def cmd_gadgets(_config: RunConfig, _args: argparse.Namespace) -> int:
    checks = verify_gadgets()
    all_ok = True
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        line = f"{status} {check.name}: {check.cases} cases"
        if not check.passed:
            line += f" (first counterexample: {check.counterexample})"
            all_ok = False
        print(line)
    return 0 if all_ok else 1


# -- transpile-report -----------------------------------------------------------


def cmd_transpile_report(config: RunConfig, args: argparse.Namespace) -> int:
    order = used_pixels(config.patterns)
    vector = args.vector if args.vector is not None else "1" * len(order)
    if len(vector) != len(order) or set(vector) - {"0", "1"}:
        raise ConfigError(
            f"--vector must be {len(order)} chars of 0/1, got {vector!r}")
    coupling_name = config.coupling if config.coupling != "none" else "heavy-hex-27"
    coupling = COUPLING_PRESETS[coupling_name]()
    width, height = config.grid_dims
    grid = grid_from_input_bits(width, height, order, vector)
    circuit, _ = build_pqht(grid, config.patterns, measure=config.measure)
    basis = decompose_to_basis(circuit)
    routed, mapping, report = route(basis, coupling, config.seed)
    payload = {
        "config": config.echo(),
        "coupling": coupling_name,
        "vector": vector,
        "depth_before": report.depth_before,
        "depth_after": report.depth_after,
        "cx_count": report.cx_count,
        "swap_count": report.swap_count,
        "total_gates": report.total_gates,
        "seed": report.seed,
        "initial_layout": list(mapping.logical_to_physical),
    }
    os.makedirs(config.out_dir, exist_ok=True)
    if config.fmt == "json":
        _write_text(os.path.join(config.out_dir, "transpile_report.json"), _json_dumps(payload))
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        keys = ["vector", "coupling", "depth_before", "depth_after",
                "cx_count", "swap_count", "total_gates", "seed"]
        writer.writerow(keys)
        writer.writerow([payload[k] for k in keys])
        _write_text(os.path.join(config.out_dir, "transpile_report.csv"), buf.getvalue())
    print(
        f"transpile-report: vector {vector} on {coupling_name} seed {config.seed}: "
        f"depth {report.depth_before} -> {report.depth_after}, "
        f"cx {report.cx_count}, swaps {report.swap_count}, "
        f"total {report.total_gates}")
    return 0


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqht",
        description="Parallel quantum Hough transform verification harness",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file; flags override it")
    common.add_argument("--grid", help="grid file (rows of 0/1, top row first)")
    common.add_argument("--patterns", help="pattern file (NAME ANGLE col,row ...)")
    common.add_argument("--engine", choices=ENGINES, help="ideal (default) or noisy")
    common.add_argument("--p1", type=float, help="1-qubit depolarizing probability")
    common.add_argument("--p2", type=float, help="2-/3-qubit per-operand depolarizing probability")
    common.add_argument("--r01", type=float, help="readout 0->1 flip probability")
    common.add_argument("--r10", type=float, help="readout 1->0 flip probability")
    common.add_argument("--coupling", choices=COUPLINGS,
                        help="coupling preset; routes circuits before running")
    common.add_argument("--shots", type=int, help=f"shots per vector (default {DEFAULT_SHOTS})")
    common.add_argument("--seed", type=int, help=f"base RNG seed (default {DEFAULT_SEED})")
    common.add_argument("--measure", choices=MEASURE_MODES[:2],
                        help="measure pattern outputs (default) or all qubits")
    common.add_argument("--out", help="output directory (default pqht-out)")
    common.add_argument("--format", choices=FORMATS, help="report format where selectable")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("coverage", parents=[common],
                       help="run the exhaustive truth-table suite")
    p.set_defaults(func=cmd_coverage)
    p = sub.add_parser("sweep", parents=[common],
                       help="per-pattern certainty table")
    p.add_argument("--targets", help="comma-separated pattern names (default: all)")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("export-qasm", parents=[common],
                       help="write one OpenQASM file per input vector")
    p.set_defaults(func=cmd_export_qasm)
    p = sub.add_parser("gadgets", parents=[common],
                       help="exhaustive arithmetic gadget checks")
    p.set_defaults(func=cmd_gadgets)
    p = sub.add_parser("transpile-report", parents=[common],
                       help="routing cost metrics for one vector")
    p.add_argument("--vector", help="input bits (default: all ones)")
    p.set_defaults(func=cmd_transpile_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        return args.func(config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
