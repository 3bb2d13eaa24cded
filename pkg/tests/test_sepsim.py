import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sepqp import sepsim
from sepqp.encoding import DomainError

S = 1 / math.sqrt(2)
angles = st.floats(-10, 10, allow_nan=False)


@pytest.mark.parametrize("theta,amps", [
    (0.0, (1.0, 0.0)),
    (math.pi / 4, (S, S)),
    (math.pi / 2, (0.0, 1.0)),
    (3 * math.pi / 4, (-S, S)),
])
def test_prepare(theta, amps):
    np.testing.assert_allclose(sepsim.prepare(theta), amps, atol=1e-12)


def test_prepare_table_state_three_matches_up_to_global_sign():
    # listed as (|0> - |1>)/sqrt(2); prepare gives the negative of that
    state = sepsim.prepare(3 * math.pi / 4)
    np.testing.assert_allclose(np.square(state), np.square([S, -S]), atol=1e-12)
    np.testing.assert_allclose(state, -np.array([S, -S]), atol=1e-12)


@given(angles, angles)
def test_undo_target_rotation(tj, tt):
    out = sepsim.apply_rotation(sepsim.prepare(tj), -tt)
    np.testing.assert_allclose(out, [math.cos(tj - tt), math.sin(tj - tt)], atol=1e-12)


def test_rotation_examples():
    s = np.array([0.6, 0.8])
    np.testing.assert_array_equal(sepsim.apply_rotation(s, 0.0), s)
    np.testing.assert_allclose(sepsim.apply_rotation([1.0, 0.0], math.pi / 2), [0, 1], atol=1e-15)


def test_rotation_agrees_with_matrix():
    rng = np.random.default_rng(5)
    for theta in rng.uniform(-4, 4, 20):
        s = sepsim.prepare(rng.uniform(0, 3))
        np.testing.assert_allclose(sepsim.apply_rotation(s, theta),
                                   sepsim.rotation_matrix(theta) @ s, atol=1e-14)


@pytest.mark.parametrize("s,flipped", [
    ((1, 0), (0, 1)), ((0, 1), (1, 0)), ((0.6, 0.8), (0.8, 0.6)),
])
def test_apply_x(s, flipped):
    np.testing.assert_array_equal(sepsim.apply_x(s), flipped)


@given(angles, st.lists(st.tuples(st.booleans(), angles), max_size=20))
def test_normalization_preserved(theta, ops):
    s = sepsim.prepare(theta)
    for is_x, t in ops:
        s = sepsim.apply_x(s) if is_x else sepsim.apply_rotation(s, t)
        assert sepsim.is_normalized(s)


@given(angles, angles, angles)
def test_rotation_composition(theta, t1, t2):
    s = sepsim.prepare(theta)
    two_step = sepsim.apply_rotation(sepsim.apply_rotation(s, t1), t2)
    np.testing.assert_allclose(two_step, sepsim.apply_rotation(s, t1 + t2), atol=1e-12)


def test_all_ones_probability_examples():
    assert sepsim.all_ones_probability(np.array([[0, 1], [0, 1], [0, 1]])) == 1.0
    assert sepsim.all_ones_probability(np.array([[0, 1], [1, 0]])) == 0.0
    assert sepsim.all_ones_probability(np.array([[S, S], [S, S]])) == pytest.approx(0.25, abs=1e-15)


@given(st.lists(angles, min_size=1, max_size=8), st.randoms())
def test_all_ones_probability_order_invariant(thetas, rnd):
    reg = sepsim.register(thetas)
    perm = list(range(len(thetas)))
    rnd.shuffle(perm)
    assert sepsim.all_ones_probability(reg[perm]) == pytest.approx(
        sepsim.all_ones_probability(reg), abs=1e-15)


def test_all_ones_probability_batched():
    reg = sepsim.register([[0.1, 0.2], [0.3, 0.4]])
    out = sepsim.all_ones_probability(reg)
    assert out.shape == (2,)
    np.testing.assert_allclose(out, [math.sin(0.1) ** 2 * math.sin(0.2) ** 2,
                                     math.sin(0.3) ** 2 * math.sin(0.4) ** 2])


def test_sample_certain_events():
    assert sepsim.sample_ancilla(1.0, 1024, 3).ones == 1024
    assert sepsim.sample_ancilla(0.0, 1024, 3).ones == 0
    assert sepsim.sample_ancilla(1 + 5e-10, 10, 0).ones == 10
    assert sepsim.sample_ancilla(-5e-10, 10, 0).ones == 0


def test_sample_half_within_four_sigma_for_many_seeds():
    for seed in range(500):
        ones = sepsim.sample_ancilla(0.5, 1024, seed).ones
        assert 448 <= ones <= 576


def test_sample_reproducible():
    a = [sepsim.sample_ancilla(0.3, 1000, 42).ones for _ in range(3)]
    assert len(set(a)) == 1
    g1, g2 = sepsim.make_rng(9), sepsim.make_rng(9)
    assert [sepsim.sample_ancilla(0.7, 256, g1).ones for _ in range(10)] == \
        [sepsim.sample_ancilla(0.7, 256, g2).ones for _ in range(10)]


@pytest.mark.parametrize("p", [0.05, 0.25, 0.5, 0.8, 0.97])
@pytest.mark.parametrize("shots", [256, 1024, 4096])
def test_sample_converges_to_p(p, shots):
    sigma = math.sqrt(p * (1 - p) / shots)
    for seed in range(20):
        est = sepsim.sample_ancilla(p, shots, seed).estimate
        assert abs(est - p) <= 5 * sigma


def test_sample_errors():
    with pytest.raises(DomainError):
        sepsim.sample_ancilla(1.1, 10, 0)
    with pytest.raises(DomainError):
        sepsim.sample_ancilla(-0.01, 10, 0)
    with pytest.raises(DomainError):
        sepsim.sample_ancilla(0.5, 0, 0)


def test_sample_counts_matches_scalar_stream():
    p = np.array([[0.1, 0.9], [0.5, 0.25]])
    counts = sepsim.sample_counts(p, 100, 11)
    assert counts.shape == (2, 2)
    assert (counts >= 0).all() and (counts <= 100).all()
    np.testing.assert_array_equal(counts, sepsim.sample_counts(p, 100, 11))
