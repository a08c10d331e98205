"""Lowering to the hardware basis {RZ, SX, X, CX} and SWAP routing.

The router is a deliberately simple seeded greedy pass, not a production
algorithm: while the front 2-qubit gate spans non-adjacent physical qubits,
it inserts the SWAP (restricted to edges touching the front gate) that
minimizes the summed shortest-path distance over a small lookahead window
of pending 2-qubit gates.  Equal-cost candidates are ordered by edge index
and the seed picks among them, so identical (circuit, coupling, seed) gives
an identical routed circuit.  The point is honest SWAP and depth metrics,
which is exactly where hardware runs of these circuits hurt.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Gate, GateKind, QuantumCircuit, metrics

BASIS_GATES = (GateKind.RZ, GateKind.SX, GateKind.X, GateKind.CX)

_LOOKAHEAD = 16


@dataclass(frozen=True)
class CouplingMap:
    """Undirected connectivity graph over physical qubits."""

    num_qubits: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError("coupling map needs at least one qubit")
        seen = set()
        canon = []
        for a, b in self.edges:
            if not (0 <= a < self.num_qubits and 0 <= b < self.num_qubits):
                raise ValueError(f"edge ({a},{b}) references qubit outside 0..{self.num_qubits - 1}")
            if a == b:
                raise ValueError(f"self-loop edge ({a},{b})")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        if self.num_qubits > 1 and not self._connected():
            raise ValueError("coupling graph is not connected")

    def _connected(self) -> bool:
        adj = self.adjacency()
        seen = {0}
        queue = deque([0])
        while queue:
            node = queue.popleft()
            for nxt in adj[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return len(seen) == self.num_qubits

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_qubits)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for lst in adj:
            lst.sort()
        return adj

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in set(self.edges)

    def distances(self) -> np.ndarray:
        """All-pairs shortest path hop counts (BFS from each node)."""
        n = self.num_qubits
        adj = self.adjacency()
        dist = np.full((n, n), -1, dtype=np.int64)
        for src in range(n):
            dist[src, src] = 0
            queue = deque([src])
            while queue:
                node = queue.popleft()
                for nxt in adj[node]:
                    if dist[src, nxt] < 0:
                        dist[src, nxt] = dist[src, node] + 1
                        queue.append(nxt)
        return dist

    def degrees(self) -> list[int]:
        return [len(nbrs) for nbrs in self.adjacency()]


def heavy_hex_27() -> CouplingMap:
    """The 27-qubit heavy-hex lattice (Falcon-class device topology).

    Two rows of hexagon corners joined by bridge qubits; 28 edges, degrees
    in {1, 2, 3}.
    """
    edges = (
        (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8), (6, 7),
        (7, 10), (8, 9), (8, 11), (10, 12), (11, 14), (12, 13), (12, 15),
        (13, 14), (14, 16), (15, 18), (16, 19), (17, 18), (18, 21), (19, 20),
        (19, 22), (21, 23), (22, 25), (23, 24), (24, 25), (25, 26),
    )
    return CouplingMap(27, edges)


def fully_connected(num_qubits: int) -> CouplingMap:
    edges = tuple(
        (a, b) for a in range(num_qubits) for b in range(a + 1, num_qubits)
    )
    return CouplingMap(num_qubits, edges)


def linear_chain(num_qubits: int) -> CouplingMap:
    return CouplingMap(num_qubits, tuple((i, i + 1) for i in range(num_qubits - 1)))


COUPLING_PRESETS = {
    "heavy-hex-27": heavy_hex_27,
}


@dataclass(frozen=True)
class LayoutMapping:
    """Injective logical -> physical assignment."""

    logical_to_physical: tuple[int, ...]

    def __post_init__(self) -> None:
        l2p = self.logical_to_physical
        if len(set(l2p)) != len(l2p):
            raise ValueError(f"layout is not injective: {l2p}")

    def physical(self, logical: int) -> int:
        return self.logical_to_physical[logical]


@dataclass(frozen=True)
class TranspileReport:
    depth_before: int
    depth_after: int
    cx_count: int
    swap_count: int
    total_gates: int
    seed: int


# -- basis decomposition ------------------------------------------------------

_QUARTER = math.pi / 4.0
_HALF = math.pi / 2.0


def _h_as_basis(q: int) -> list[Gate]:
    # RZ(pi/2) SX RZ(pi/2) = H up to global phase exp(-i pi/4)
    return [
        Gate(GateKind.RZ, (q,), angle=_HALF),
        Gate(GateKind.SX, (q,)),
        Gate(GateKind.RZ, (q,), angle=_HALF),
    ]


def _ccx_as_basis(c1: int, c2: int, t: int) -> list[Gate]:
    # Standard 6-CX construction with RZ(+-pi/4) phases; equals CCX up to
    # global phase once the H pair is itself basis-decomposed.
    seq: list[Gate] = []
    seq += _h_as_basis(t)
    seq.append(Gate(GateKind.CX, (c2, t)))
    seq.append(Gate(GateKind.RZ, (t,), angle=-_QUARTER))
    seq.append(Gate(GateKind.CX, (c1, t)))
    seq.append(Gate(GateKind.RZ, (t,), angle=_QUARTER))
    seq.append(Gate(GateKind.CX, (c2, t)))
    seq.append(Gate(GateKind.RZ, (t,), angle=-_QUARTER))
    seq.append(Gate(GateKind.CX, (c1, t)))
    seq.append(Gate(GateKind.RZ, (c2,), angle=_QUARTER))
    seq.append(Gate(GateKind.RZ, (t,), angle=_QUARTER))
    seq.append(Gate(GateKind.CX, (c1, c2)))
    seq += _h_as_basis(t)
    seq.append(Gate(GateKind.RZ, (c1,), angle=_QUARTER))
    seq.append(Gate(GateKind.RZ, (c2,), angle=-_QUARTER))
    seq.append(Gate(GateKind.CX, (c1, c2)))
    return seq


def decompose_to_basis(circuit: QuantumCircuit) -> QuantumCircuit:
    """Rewrite onto {RZ, SX, X, CX}; MEASURE passes through.

    Preserves semantics up to global phase (RZ-based H shifts phase).
    """
    out = QuantumCircuit(circuit.num_qubits, circuit.num_clbits)
    for gate in circuit.instructions:
        kind = gate.kind
        if kind in BASIS_GATES or kind is GateKind.MEASURE:
            out.append(gate)
        elif kind is GateKind.H:
            out.extend(_h_as_basis(gate.qubits[0]))
        elif kind is GateKind.SWAP:
            a, b = gate.qubits
            out.cx(a, b).cx(b, a).cx(a, b)
        elif kind is GateKind.CCX:
            out.extend(_ccx_as_basis(*gate.qubits))
        else:  # pragma: no cover - enum is closed
            raise ValueError(f"no decomposition for {kind.value}")
    return out


def expand_swaps(circuit: QuantumCircuit) -> QuantumCircuit:
    """SWAP -> 3 CX so routed circuits export over the hardware basis."""
    out = QuantumCircuit(circuit.num_qubits, circuit.num_clbits)
    for gate in circuit.instructions:
        if gate.kind is GateKind.SWAP:
            a, b = gate.qubits
            out.cx(a, b).cx(b, a).cx(a, b)
        else:
            out.append(gate)
    return out


# -- routing ------------------------------------------------------------------


def _initial_layout(
    circuit: QuantumCircuit,
    coupling: CouplingMap,
    initial_layout: str | Sequence[int],
) -> list[int]:
    n_logical = circuit.num_qubits
    if isinstance(initial_layout, str):
        if initial_layout == "trivial":
            return list(range(n_logical))
        if initial_layout == "degree":
            # Busiest logical lines (by 2-qubit gate incidence) onto the
            # best-connected physical qubits; stable on ties.
            activity = [0] * n_logical
            for gate in circuit.instructions:
                if gate.kind.arity == 2:
                    for q in gate.qubits:
                        activity[q] += 1
            logical_order = sorted(range(n_logical), key=lambda q: (-activity[q], q))
            degrees = coupling.degrees()
            physical_order = sorted(range(coupling.num_qubits), key=lambda p: (-degrees[p], p))
            l2p = [0] * n_logical
            for logical, physical in zip(logical_order, physical_order):
                l2p[logical] = physical
            return l2p
        raise ValueError(f"initial_layout must be 'trivial', 'degree' or a sequence, got {initial_layout!r}")
    layout = [int(p) for p in initial_layout]
    if len(layout) != n_logical or len(set(layout)) != n_logical:
        raise ValueError("explicit initial layout must assign each logical qubit a distinct physical qubit")
    if any(not (0 <= p < coupling.num_qubits) for p in layout):
        raise ValueError("explicit initial layout references physical qubits outside the coupling map")
    return layout


def route(
    circuit: QuantumCircuit,
    coupling: CouplingMap,
    seed: int,
    *,
    initial_layout: str | Sequence[int] = "trivial",
) -> tuple[QuantumCircuit, LayoutMapping, TranspileReport]:
    """Insert SWAPs so every 2-qubit gate acts on a coupling edge.

    Requires a basis circuit (RZ/SX/X/CX plus MEASURE).  Returns the routed
    circuit over physical qubits, the initial LayoutMapping, and cost
    metrics.  MEASUREs follow their logical qubit to its current physical
    position and keep their clbit.
    """
    for pos, gate in enumerate(circuit.instructions):
        if gate.kind not in BASIS_GATES and gate.kind is not GateKind.MEASURE:
            raise ValueError(
                f"instruction {pos} ({gate.kind.value}): route expects a basis "
                "circuit; run decompose_to_basis first")
    if circuit.num_qubits > coupling.num_qubits:
        raise ValueError(
            f"{circuit.num_qubits} logical qubits exceed {coupling.num_qubits} physical")

    l2p = _initial_layout(circuit, coupling, initial_layout)
    mapping = LayoutMapping(tuple(l2p))
    p2l: list[int | None] = [None] * coupling.num_qubits
    for logical, physical in enumerate(l2p):
        p2l[physical] = logical

    dist = coupling.distances()
    edges = coupling.edges  # canonical order = edge index order
    adjacency = coupling.adjacency()
    rng = np.random.default_rng(seed)
    out = QuantumCircuit(coupling.num_qubits, circuit.num_clbits)

    pending = [
        (pos, gate.qubits[0], gate.qubits[1])
        for pos, gate in enumerate(circuit.instructions)
        if gate.kind.arity == 2
    ]
    pending_at = 0
    swap_count = 0

    def window_cost(trial_l2p: list[int]) -> int:
        cost = 0
        for _, la, lb in pending[pending_at:pending_at + _LOOKAHEAD]:
            cost += int(dist[trial_l2p[la]][trial_l2p[lb]])
        return cost

    def apply_swap(pa: int, pb: int) -> None:
        nonlocal swap_count
        la, lb = p2l[pa], p2l[pb]
        p2l[pa], p2l[pb] = lb, la
        if la is not None:
            l2p[la] = pb
        if lb is not None:
            l2p[lb] = pa
        out.swap(pa, pb)
        swap_count += 1

    for pos, gate in enumerate(circuit.instructions):
        if gate.kind is GateKind.MEASURE:
            out.measure(l2p[gate.qubits[0]], gate.clbit)
            continue
        if gate.kind.arity == 1:
            out.append(Gate(gate.kind, (l2p[gate.qubits[0]],), angle=gate.angle))
            continue
        la, lb = gate.qubits
        best_seen = int(dist[l2p[la]][l2p[lb]])
        since_progress = 0
        while dist[l2p[la]][l2p[lb]] > 1:
            pa, pb = l2p[la], l2p[lb]
            if since_progress > coupling.num_qubits:
                # Stall guard: force a hop along a shortest path so the
                # front gate always terminates.
                hop = min(adjacency[pa], key=lambda nbr: (int(dist[nbr][pb]), nbr))
                candidates = [(min(pa, hop), max(pa, hop))]
            else:
                candidates = [e for e in edges if pa in e or pb in e]
            scored = []
            for ea, eb in candidates:
                trial = list(l2p)
                la2, lb2 = p2l[ea], p2l[eb]
                if la2 is not None:
                    trial[la2] = eb
                if lb2 is not None:
                    trial[lb2] = ea
                scored.append((window_cost(trial), (ea, eb)))
            best = min(score for score, _ in scored)
            tied = [edge for score, edge in scored if score == best]
            choice = tied[int(rng.integers(len(tied)))]
            apply_swap(*choice)
            front = int(dist[l2p[la]][l2p[lb]])
            if front < best_seen:
                best_seen = front
                since_progress = 0
            else:
                since_progress += 1
        out.cx(l2p[la], l2p[lb])
        pending_at += 1

    routed_metrics = metrics(out)
    report = TranspileReport(
        depth_before=metrics(circuit).depth,
        depth_after=routed_metrics.depth,
        cx_count=routed_metrics.gate_counts.get("cx", 0),
        swap_count=swap_count,
        total_gates=len(out.instructions),
        seed=seed,
    )
    return out, mapping, report


def respects_coupling(circuit: QuantumCircuit, coupling: CouplingMap) -> list[int]:
    """Positions of 2-qubit gates not on a coupling edge (empty = valid)."""
    edge_set = set(coupling.edges)
    bad = []
    for pos, gate in enumerate(circuit.instructions):
        if gate.kind.arity == 2:
            a, b = gate.qubits
            if (min(a, b), max(a, b)) not in edge_set:
                bad.append(pos)
        elif gate.kind.arity == 3:
            bad.append(pos)
    return bad


# -- equivalence --------------------------------------------------------------


def compact_circuit(circuit: QuantumCircuit) -> tuple[QuantumCircuit, tuple[int, ...]]:
    """Drop untouched qubit lines (routed circuits carry idle physicals).

    Returns the compacted circuit and the kept original qubit indices in
    ascending order.  Clbits are preserved as-is.
    """
    active = sorted({q for gate in circuit.instructions for q in gate.qubits})
    if not active:
        active = [0]
    new_index = {q: i for i, q in enumerate(active)}
    out = QuantumCircuit(len(active), circuit.num_clbits)
    for gate in circuit.instructions:
        out.append(
            Gate(
                gate.kind,
                tuple(new_index[q] for q in gate.qubits),
                angle=gate.angle,
                clbit=gate.clbit,
            )
        )
    return out, tuple(active)


def verify_equivalence(
    original: QuantumCircuit,
    lowered: QuantumCircuit,
    mapping: LayoutMapping,
    test_vectors: Sequence[Sequence[int]] = ((),),
    *,
    tolerance: float = 1e-9,
) -> tuple[bool, tuple[int, ...] | None]:
    """Compare measured distributions of two circuits under a layout.

    Each test vector is a set of logical qubits prepared in |1> (X-prepended
    on the original; on ``mapping.physical(q)`` in the lowered circuit).
    Returns (True, None) when every vector's distributions match within
    total-variation ``tolerance``, else (False, first_bad_vector).
    """
    from .simulator import measured_probabilities

    if not original.measurements() or not lowered.measurements():
        raise ValueError("both circuits need MEASURE instructions to compare")
    for vector in test_vectors:
        vec = tuple(sorted(int(q) for q in vector))
        orig = QuantumCircuit(original.num_qubits, original.num_clbits)
        for q in vec:
            orig.x(q)
        orig.extend(original.instructions)
        low = QuantumCircuit(lowered.num_qubits, lowered.num_clbits)
        for q in vec:
            low.x(mapping.physical(q))
        low.extend(lowered.instructions)
        low_small, _ = compact_circuit(low)
        dist_a = measured_probabilities(orig)
        dist_b = measured_probabilities(low_small)
        keys = set(dist_a) | set(dist_b)
        tv = 0.5 * sum(abs(dist_a.get(k, 0.0) - dist_b.get(k, 0.0)) for k in keys)
        if tv > tolerance:
            return False, vec
    return True, None
