import math

import numpy as np
import pytest

import pqht.simulator as sim
from pqht.circuit import GateKind, QuantumCircuit
from pqht.simulator import (
    ResourceLimitError,
    ShotHistogram,
    StateVector,
    bits_from_int,
    gate_matrix,
    int_from_bits,
    iter_states,
    measured_probabilities,
    measured_qubits_in_clbit_order,
    probabilities,
    run_exact,
    sample_shots,
)


class TestBitStrings:
    @pytest.mark.parametrize("value,width,text", [
        (0, 3, "000"), (1, 3, "100"), (4, 3, "001"), (5, 3, "101"), (1, 4, "1000"),
    ])
    def test_bits_from_int_is_lsb_first(self, value, width, text):
        assert bits_from_int(value, width) == text
        assert int_from_bits(text) == value

    def test_round_trip(self):
        for v in range(64):
            assert int_from_bits(bits_from_int(v, 6)) == v


class TestGateMatrix:
    def test_fixed_matrices(self):
        s = 1 / math.sqrt(2)
        assert np.allclose(gate_matrix(GateKind.H), [[s, s], [s, -s]])
        assert np.array_equal(gate_matrix(GateKind.X), [[0, 1], [1, 0]])
        assert np.allclose(gate_matrix(GateKind.SX),
                           0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]))

    def test_rz_is_half_angle_diagonal(self):
        theta = 0.7
        m = gate_matrix(GateKind.RZ, theta)
        assert np.allclose(np.diag(m), [np.exp(-0.35j), np.exp(0.35j)])
        with pytest.raises(ValueError, match="angle"):
            gate_matrix(GateKind.RZ)

    def test_control_is_local_bit_zero(self):
        cx = gate_matrix(GateKind.CX)
        # local index = target_bit<<1 | control_bit; flips target when control=1
        assert cx[3, 1] == 1 and cx[1, 3] == 1 and cx[0, 0] == 1 and cx[2, 2] == 1
        ccx = gate_matrix(GateKind.CCX)
        assert ccx[7, 3] == 1 and ccx[3, 7] == 1
        swap = gate_matrix(GateKind.SWAP)
        assert swap[2, 1] == 1 and swap[1, 2] == 1

    def test_measure_has_no_matrix(self):
        with pytest.raises(ValueError, match="measure"):
            gate_matrix(GateKind.MEASURE)

    def test_sx_squares_to_x(self):
        sx = gate_matrix(GateKind.SX)
        assert np.allclose(sx @ sx, gate_matrix(GateKind.X))


class TestRunExact:
    def test_bell_state(self):
        state = run_exact(QuantumCircuit(2).h(0).cx(0, 1))
        s = 1 / math.sqrt(2)
        assert np.allclose(state.amplitudes, [s, 0, 0, s])

    def test_x_sets_little_endian_index(self):
        state = run_exact(QuantumCircuit(3).x(1))
        want = np.zeros(8)
        want[2] = 1.0
        assert np.allclose(state.amplitudes, want)

    def test_terminal_measures_ignored(self):
        bare = run_exact(QuantumCircuit(2).h(0).cx(0, 1))
        measured = run_exact(QuantumCircuit(2, 2).h(0).cx(0, 1).measure(0, 0).measure(1, 1))
        assert np.array_equal(bare.amplitudes, measured.amplitudes)

    def test_mid_circuit_measure_rejected(self):
        circ = QuantumCircuit(2, 1).h(0).measure(0, 0).x(1)
        with pytest.raises(ValueError, match=r"instruction 2 \(x\).*mid-circuit"):
            run_exact(circ)

    def test_qubit_limit(self):
        circ = QuantumCircuit(4).h(0)
        with pytest.raises(ResourceLimitError, match="4 qubits"):
            run_exact(circ, qubit_limit=3)
        run_exact(circ, qubit_limit=4)  # boundary is inclusive

    def test_norm_is_exactly_preserved_on_deep_circuit(self):
        circ = QuantumCircuit(5)
        rng = np.random.default_rng(3)
        for _ in range(200):
            q = int(rng.integers(5))
            circ.h(q).rz(q, float(rng.uniform(-10, 10))).h(q)
        state = run_exact(circ)
        assert abs(state.norm_squared() - 1.0) < 1e-12


class TestIterStates:
    def test_positions_and_final_state(self):
        circ = QuantumCircuit(2, 2).h(0).cx(0, 1).measure(0, 0).measure(1, 1)
        steps = [(pos, state.amplitudes.copy()) for pos, state in iter_states(circ)]
        assert [pos for pos, _ in steps] == [0, 1]  # measures are not yielded
        assert np.array_equal(steps[-1][1], run_exact(circ).amplitudes)

    def test_yields_live_buffer(self):
        circ = QuantumCircuit(1).h(0).h(0)
        states = [state for _, state in iter_states(circ)]
        # both yields wrap the same buffer by design
        assert states[0].amplitudes is states[1].amplitudes


class TestProbabilities:
    def test_marginals_sum_like_full(self):
        circ = QuantumCircuit(3).h(0).cx(0, 1).sx(2)
        state = run_exact(circ)
        full = probabilities(state, (0, 1, 2))
        marginal = probabilities(state, (0,))
        grouped = {"0": 0.0, "1": 0.0}
        for key, p in full.items():
            grouped[key[0]] += p
        assert marginal.keys() == {"0", "1"}
        for key in grouped:
            assert marginal.get(key, 0.0) == pytest.approx(grouped[key], abs=1e-12)

    def test_first_listed_qubit_is_leftmost(self):
        state = run_exact(QuantumCircuit(3).x(2))
        assert probabilities(state, (2, 0)) == {"10": 1.0}
        assert probabilities(state, (0, 2)) == {"01": 1.0}

    def test_zero_entries_omitted(self):
        state = run_exact(QuantumCircuit(2).x(0))
        assert probabilities(state, (0, 1)) == {"10": 1.0}

    def test_empty_selection(self):
        state = run_exact(QuantumCircuit(1).h(0))
        assert probabilities(state, ()) == {"": 1.0}

    def test_validation(self):
        state = run_exact(QuantumCircuit(2).h(0))
        with pytest.raises(ValueError, match="out of range"):
            probabilities(state, (2,))
        with pytest.raises(ValueError, match="duplicate"):
            probabilities(state, (0, 0))

    def test_statevector_wrapper(self):
        state = StateVector(np.array([1.0, 0, 0, 0], dtype=np.complex128))
        assert state.num_qubits == 2
        assert state.norm_squared() == 1.0


class TestMeasuredProbabilities:
    def test_keys_follow_clbit_order(self):
        circ = QuantumCircuit(3, 2).x(2).measure(2, 0).measure(0, 1)
        assert measured_probabilities(circ) == {"10": 1.0}
        assert measured_qubits_in_clbit_order(circ) == (2, 0)

    def test_clbit_order_beats_append_order(self):
        circ = QuantumCircuit(2, 2).x(0).measure(0, 1).measure(1, 0)
        assert measured_qubits_in_clbit_order(circ) == (1, 0)
        assert measured_probabilities(circ) == {"01": 1.0}

    def test_requires_measures(self):
        with pytest.raises(ValueError, match="no MEASURE"):
            measured_probabilities(QuantumCircuit(1).h(0))


class TestSampleShots:
    def test_deterministic_circuit_gives_point_mass(self):
        circ = QuantumCircuit(3, 3).x(0).x(2).measure(0, 0).measure(1, 1).measure(2, 2)
        hist = sample_shots(circ, 100, seed=0)
        assert hist.counts == {"101": 100}
        assert hist.shots == 100 and hist.seed == 0
        assert hist.num_bits == 3

    def test_same_seed_reproduces_exactly(self):
        circ = QuantumCircuit(2, 2).h(0).cx(0, 1).measure(0, 0).measure(1, 1)
        a = sample_shots(circ, 999, seed=42)
        b = sample_shots(circ, 999, seed=42)
        assert a.counts == b.counts

    def test_different_seed_differs(self):
        circ = QuantumCircuit(2, 2).h(0).cx(0, 1).measure(0, 0).measure(1, 1)
        a = sample_shots(circ, 999, seed=1)
        b = sample_shots(circ, 999, seed=2)
        assert a.counts != b.counts

    def test_counts_total_and_support(self):
        circ = QuantumCircuit(2, 2).h(0).cx(0, 1).measure(0, 0).measure(1, 1)
        hist = sample_shots(circ, 4096, seed=5)
        assert sum(hist.counts.values()) == 4096
        assert set(hist.counts) <= {"00", "11"}
        # both arms of the Bell pair show up at this sample size
        assert hist.counts["00"] > 1500 and hist.counts["11"] > 1500

    def test_empirical_matches_exact_for_biased_state(self):
        theta = 2.0
        circ = QuantumCircuit(1, 1).h(0).rz(0, theta).h(0).measure(0, 0)
        want = measured_probabilities(circ)
        hist = sample_shots(circ, 40000, seed=11)
        for key, p in want.items():
            sigma = math.sqrt(p * (1 - p) / 40000)
            assert abs(hist.counts.get(key, 0) / 40000 - p) < 5 * sigma

    def test_shots_validation(self):
        circ = QuantumCircuit(1, 1).measure(0, 0)
        with pytest.raises(ValueError, match="shots"):
            sample_shots(circ, 0, seed=1)

    def test_sparse_path_matches_dense_on_point_mass(self, monkeypatch):
        circ = QuantumCircuit(3, 3).x(0).x(1).measure(0, 0).measure(1, 1).measure(2, 2)
        dense = sample_shots(circ, 50, seed=9)
        monkeypatch.setattr(sim, "DENSE_SAMPLE_LIMIT", 2)
        sparse = sample_shots(circ, 50, seed=9)
        assert dense.counts == sparse.counts == {"110": 50}

    def test_sparse_path_statistics(self, monkeypatch):
        monkeypatch.setattr(sim, "DENSE_SAMPLE_LIMIT", 1)
        circ = QuantumCircuit(2, 2).h(0).cx(0, 1).measure(0, 0).measure(1, 1)
        hist = sample_shots(circ, 4096, seed=21)
        assert set(hist.counts) == {"00", "11"}
        assert abs(hist.counts["00"] / 4096 - 0.5) < 5 * math.sqrt(0.25 / 4096)

    def test_sparse_path_respects_clbit_order(self, monkeypatch):
        monkeypatch.setattr(sim, "DENSE_SAMPLE_LIMIT", 1)
        circ = QuantumCircuit(3, 2).x(2).measure(2, 0).measure(0, 1)
        hist = sample_shots(circ, 25, seed=2)
        assert hist.counts == {"10": 25}


class TestShotHistogram:
    def test_num_bits_from_keys(self):
        assert ShotHistogram({"0101": 3}, shots=3, seed=0).num_bits == 4
