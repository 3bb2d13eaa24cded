import itertools
import math
from functools import reduce

import numpy as np
import pytest

from sepqp.densesim import (apply_1q, apply_mcx, dense_run, dense_state, mcx_permutation,
                            ry_half, zero_state)
from sepqp.encoding import DomainError, PatternCode


def kron_oracle(input, weight):
    """Independent construction from full Kronecker-product matrices."""
    n = len(input)
    eye = np.eye(2)
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    def layer(mats):
        return reduce(np.kron, mats + [eye])
    u_in = layer([ry_half(d * math.pi / input.m) for d in input])
    u_w = layer([ry_half(-d * math.pi / weight.m) for d in weight])
    xs = layer([x] * n)
    size = 2 ** (n + 1)
    mcx = np.eye(size)
    mcx[[size - 2, size - 1]] = mcx[[size - 1, size - 2]]
    psi = mcx @ xs @ u_w @ u_in @ zero_state(n + 1)
    return float(np.sum(psi[1::2] ** 2))


def code(s):
    return PatternCode(tuple(int(c) for c in s))


@pytest.mark.parametrize("i,w,expected", [
    ("1122", "1122", 1.0),
    ("0", "2", 0.0),
    ("00", "13", 0.25),
])
def test_dense_run_examples(i, w, expected):
    assert kron_oracle(code(i), code(w)) == pytest.approx(expected, abs=1e-12)
    assert dense_run(code(i), code(w)) == pytest.approx(expected, abs=1e-12)


def test_dense_matches_kron_oracle_exhaustive_n2():
    for i in itertools.product(range(4), repeat=2):
        for w in itertools.product(range(4), repeat=2):
            a, b = PatternCode(i), PatternCode(w)
            assert dense_run(a, b) == pytest.approx(kron_oracle(a, b), abs=1e-12)


def test_basis_ordering_qubit_zero_most_significant():
    psi = apply_1q(zero_state(3), np.array([[0.0, 1.0], [1.0, 0.0]]), 0, 3)
    assert psi[0b100] == 1.0


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_mcx_is_involution(n):
    rng = np.random.default_rng(n)
    psi = rng.normal(size=2 ** (n + 1))
    psi /= np.linalg.norm(psi)
    np.testing.assert_array_equal(apply_mcx(apply_mcx(psi, n), n), psi)
    perm = mcx_permutation(n)
    assert sorted(perm) == list(range(2 ** (n + 1)))
    assert (perm != np.arange(2 ** (n + 1))).sum() == 2


def test_dense_state_is_normalized():
    psi = dense_state(code("3102"), code("1230"))
    assert abs(np.sum(psi ** 2) - 1) < 1e-10


def test_length_mismatch():
    with pytest.raises(DomainError):
        dense_run(code("12"), code("1"))
