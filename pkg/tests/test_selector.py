import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_probabilities
from hqaco.oracle import chi_square_uniformity, matrix_simulate
from hqaco.selector import (
    build_selector,
    get_parameters,
    get_selector,
    qubits_for,
    reconstruct_amplitudes,
    select,
)
from hqaco.statevec import GateKind, run_circuit

SAMPLE_AMPS = np.sqrt([0.3, 0.2, 0.4, 0.1])
SAMPLE_ANGLES = [1.982313, 2.013707, 0.927295]


class TestGetParameters:
    def test_four_amplitudes(self):
        np.testing.assert_allclose(get_parameters(SAMPLE_AMPS), SAMPLE_ANGLES, atol=1e-5)

    def test_product_identities(self):
        r = get_parameters(SAMPLE_AMPS)
        c = np.cos(r / 2)
        s = np.sin(r / 2)
        assert c[0] == pytest.approx(math.sqrt(0.3), abs=1e-12)
        assert s[0] * c[1] == pytest.approx(math.sqrt(0.2), abs=1e-12)
        assert s[0] * s[1] * c[2] == pytest.approx(math.sqrt(0.4), abs=1e-12)
        assert s[0] * s[1] * s[2] == pytest.approx(math.sqrt(0.1), abs=1e-12)

    def test_trivial(self):
        np.testing.assert_array_equal(get_parameters([1.0, 0.0]), [0.0])

    def test_rounded_amplitudes(self):
        amps = [0.57118, 0.44048, 0.49724, 0.48215, 0, 0, 0, 0]
        r = get_parameters(amps)
        assert r.size == 7
        np.testing.assert_allclose(reconstruct_amplitudes(r), amps, atol=1e-4)

    def test_interior_zero(self):
        amps = np.sqrt([0.5, 0.0, 0.25, 0.25])
        np.testing.assert_allclose(reconstruct_amplitudes(get_parameters(amps)), amps, atol=1e-12)

    @pytest.mark.parametrize(
        "bad",
        [[0.5, 0.5], [-0.6, 0.8], [1.0], [float("nan"), 1.0]],
    )
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            get_parameters(bad)


class TestReconstruct:
    def test_quarter_turn(self):
        np.testing.assert_allclose(reconstruct_amplitudes([math.pi / 2]), [math.sqrt(0.5)] * 2)

    def test_sample_angles(self):
        np.testing.assert_allclose(reconstruct_amplitudes(SAMPLE_ANGLES), SAMPLE_AMPS, atol=1e-5)

    def test_zero_angles(self):
        np.testing.assert_array_equal(reconstruct_amplitudes(np.zeros(7)), np.eye(8)[0])


@settings(max_examples=300, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    n=st.sampled_from([2, 4, 8, 16, 32]),
    zeros=st.sampled_from([0.0, 0.3, 0.7]),
)
def test_round_trip(seed, n, zeros):
    p = random_probabilities(n, np.random.default_rng(seed), zeros)
    a = np.sqrt(p)
    out = reconstruct_amplitudes(get_parameters(a))
    np.testing.assert_allclose(out, a, atol=1e-9)
    assert abs(np.dot(out, out) - 1.0) < 1e-9


class TestBuildSelector:
    def test_one_qubit(self):
        s = build_selector(1)
        assert [(g.kind, g.target, g.controls) for g in s.template] == [(GateKind.RY, 0, ())]

    def test_two_qubit_order(self):
        s = build_selector(2)
        got = [(g.kind, g.target, g.controls, g.param, g.sign, g.offset) for g in s.template]
        assert got == [
            (GateKind.RY, 0, (), 0, 1.0, 0.0),
            (GateKind.CRY, 1, (0,), 1, -1.0, 0.0),
            (GateKind.CRY, 0, (1,), 2, 1.0, math.pi),
        ]

    def test_three_qubit_layout(self):
        s = build_selector(3)
        got = [(g.kind.value, g.target, set(g.controls), g.param) for g in s.template]
        assert got == [
            ("RY", 0, set(), 0),
            ("CRY", 1, {0}, 1),
            ("CRY", 0, {1}, 2),
            ("CRY", 2, {0, 1}, 3),
            ("CNOT", 1, {2}, None),
            ("CNOT", 0, {2}, None),
            ("CRY", 0, {2}, 4),
            ("CRY", 1, {0, 2}, 5),
            ("CRY", 0, {1, 2}, 6),
        ]
        signs = [(g.sign, g.offset) for g in s.template if g.param is not None]
        assert signs[5] == (-1.0, 0.0) and signs[6] == (1.0, math.pi)

    @pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 6])
    def test_gate_census(self, q):
        s = build_selector(q)
        params = [g.param for g in s.template if g.param is not None]
        assert sorted(params) == list(range(2**q - 1))
        assert s.parameter_count == 2**q - 1

    @pytest.mark.parametrize("q", [1, 2, 3, 4, 5])
    def test_index_map_is_bijection(self, q):
        s = get_selector(q)
        assert sorted(s.index_map.tolist()) == list(range(2**q))
        np.testing.assert_array_equal(s.candidate_of[s.index_map], np.arange(2**q))

    def test_two_qubit_state(self):
        s = build_selector(2)
        state = run_circuit(s.bind(get_parameters(SAMPLE_AMPS)))
        # candidates appear at |00>, |10>, |01>, |11>
        np.testing.assert_allclose(state.amplitudes**2, [0.3, 0.4, 0.2, 0.1], atol=1e-9)
        np.testing.assert_allclose(state.amplitudes[s.index_map] ** 2, [0.3, 0.2, 0.4, 0.1], atol=1e-9)

    def test_fast_path_matches_bound_circuit(self, rng):
        for q in range(1, 6):
            s = get_selector(q)
            angles = rng.uniform(0, math.pi, 2**q - 1)
            np.testing.assert_allclose(
                s.prepare(angles).amplitudes, run_circuit(s.bind(angles)).amplitudes, atol=1e-14
            )
            if q <= 4:
                np.testing.assert_allclose(
                    s.prepare(angles).amplitudes,
                    matrix_simulate(s.bind(angles)).amplitudes,
                    atol=1e-12,
                )


@settings(max_examples=300, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    q=st.integers(1, 5),
    zeros=st.sampled_from([0.0, 0.4]),
)
def test_fidelity(seed, q, zeros):
    s = get_selector(q)
    p = random_probabilities(2**q, np.random.default_rng(seed), zeros)
    amps = s.encode(p).amplitudes
    np.testing.assert_allclose(amps[s.index_map] ** 2, p, atol=1e-9)


def test_qubits_for():
    assert [qubits_for(n) for n in (1, 2, 3, 4, 5, 8, 9, 16, 17)] == [1, 1, 2, 2, 3, 3, 4, 4, 5]


class TestSelect:
    def test_single_candidate(self, rng):
        assert select([1.0], 10, rng) == 0

    def test_zero_probability_never_chosen(self, rng):
        assert all(select([0.0, 1.0], 10, rng) == 1 for _ in range(50))

    @pytest.mark.parametrize("probs", [[0.0, 0.0], [0.5, 0.4], [0.5, 0.6], [-0.1, 1.1]])
    def test_rejects_bad_vectors(self, probs, rng):
        with pytest.raises(ValueError):
            select(probs, 10, rng)

    def test_deterministic(self):
        p = [0.32625, 0.19402, 0.24725, 0.23248]
        a = [select(p, 10, np.random.default_rng(s)) for s in range(30)]
        b = [select(p, 10, np.random.default_rng(s)) for s in range(30)]
        assert a == b

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 20), shots=st.integers(1, 12))
    def test_zero_exclusion(self, seed, n, shots):
        rng = np.random.default_rng(seed)
        p = random_probabilities(n, rng, zero_fraction=0.5)
        for _ in range(5):
            assert p[select(p, shots, rng)] > 0

    def test_ties_use_rng(self):
        # Two equally likely candidates, two shots: ties are common and must
        # not always resolve to the same side.
        picks = {select([0.5, 0.5], 2, np.random.default_rng(s)) for s in range(40)}
        assert picks == {0, 1}

    def test_majority_vote_sharpens(self, rng):
        from scipy.stats import binom

        p = [0.6, 0.4]
        wins = sum(select(p, 10, rng) == 0 for _ in range(4000)) / 4000
        # 6+ of 10 shots, plus half of the 5-5 ties: 0.7334
        expected = binom.sf(5, 10, 0.6) + 0.5 * binom.pmf(5, 10, 0.6)
        assert abs(wins - expected) < 0.03

    def test_single_shot_frequencies(self, rng):
        p = np.array([0.32625, 0.19402, 0.24725, 0.23248])
        draws = [select(p, 1, rng) for _ in range(20_000)]
        assert chi_square_uniformity(np.bincount(draws, minlength=4), p).passed
