"""Brute-force statevector oracle for the perceptron circuit.

The register has ``n`` pattern qubits plus one ancilla. Basis index bits are
ordered with qubit 0 most significant and the ancilla least significant, so
the ancilla reads 1 exactly on odd indices.

This module exists to cross-check :mod:`sepqp.sepsim`; it is written for
clarity, not speed, and is meant for ``n`` up to about 12.
"""
from __future__ import annotations

import numpy as np

from .encoding import DomainError, PatternCode

NORM_ATOL = 1e-10

X_MATRIX = np.array([[0.0, 1.0], [1.0, 0.0]])


def ry_half(theta: float) -> np.ndarray:
    """Matrix taking |0> to ``cos(theta)|0> + sin(theta)|1>``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def zero_state(num_qubits: int) -> np.ndarray:
    psi = np.zeros(2 ** num_qubits)
    psi[0] = 1.0
    return psi


def apply_1q(psi: np.ndarray, gate: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    t = psi.reshape((2,) * num_qubits)
    t = np.tensordot(gate, t, axes=([1], [qubit]))
    t = np.moveaxis(t, 0, qubit)
    return t.reshape(-1)


def mcx_permutation(num_controls: int) -> np.ndarray:
    """Index permutation of an n-controlled NOT onto the last qubit.

    ``psi[perm]`` is the transformed state. Controls are all qubits but the
    last; the ancilla bit toggles when every control bit is 1.
    """
    size = 2 ** (num_controls + 1)
    idx = np.arange(size)
    all_set = (idx >> 1) == (1 << num_controls) - 1
    return np.where(all_set, idx ^ 1, idx)


def apply_mcx(psi: np.ndarray, num_controls: int) -> np.ndarray:
    return psi[mcx_permutation(num_controls)]


def ancilla_one_probability(psi: np.ndarray) -> float:
    return float(np.sum(np.square(psi[1::2])))


def _check_norm(psi: np.ndarray):
    norm = float(np.sum(np.square(psi)))
    if abs(norm - 1.0) > NORM_ATOL:
        raise AssertionError(f"norm drifted to {norm}")


def dense_state(input: PatternCode, weight: PatternCode) -> np.ndarray:
    """Full statevector after the multi-controlled NOT, before measurement."""
    if len(input) != len(weight) or input.m != weight.m:
        raise DomainError("input and weight must have equal length and alphabet")
    n = len(input)
    total = n + 1
    psi = zero_state(total)
    for q, theta in enumerate(input.angles()):
        psi = apply_1q(psi, ry_half(theta), q, total)
        _check_norm(psi)
    for q, theta in enumerate(weight.angles()):
        # adjoint of the weight preparation
        psi = apply_1q(psi, ry_half(-theta), q, total)
        _check_norm(psi)
    for q in range(n):
        psi = apply_1q(psi, X_MATRIX, q, total)
        _check_norm(psi)
    psi = apply_mcx(psi, n)
    _check_norm(psi)
    return psi


def dense_run(input: PatternCode, weight: PatternCode) -> float:
    """Probability of reading the ancilla as 1."""
    return ancilla_one_probability(dense_state(input, weight))
