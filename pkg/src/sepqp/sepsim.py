"""Separable-register simulator with real amplitudes.

A qubit is an array whose last axis holds ``(a, b)``, the amplitudes of |0>
and |1>. A register of ``n`` qubits is an array of shape ``(..., n, 2)``; any
leading axes are batch axes, so whole heatmaps run through the same code path
as a single circuit.

Every gate involved (rotations and X) is real, so complex arithmetic is never
needed. The multi-controlled NOT is not applied as a state transformation; for
a product register its only observable effect, the probability that the
ancilla flips, is ``prod(b_i**2)``.

Randomness comes from ``numpy.random.Generator`` on the PCG64 bit generator.
Integer seeds are always wrapped with :func:`make_rng` so the stream is fixed
by the seed alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .encoding import DomainError

NORM_ATOL = 1e-12
P_CLAMP = 1e-9

Seed = Union[int, np.random.Generator, None]


def make_rng(seed: Seed = None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def prepare(theta) -> np.ndarray:
    """``cos(theta)|0> + sin(theta)|1>``; shape ``theta.shape + (2,)``."""
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def apply_rotation(state: np.ndarray, theta) -> np.ndarray:
    """Rotate each qubit by its angle: ``(a cos - b sin, a sin + b cos)``.

    ``theta`` broadcasts against ``state[..., 0]``.
    """
    state = np.asarray(state, dtype=float)
    theta = np.asarray(theta, dtype=float)
    a, b = state[..., 0], state[..., 1]
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([a * c - b * s, a * s + b * c], axis=-1)


def apply_x(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=float)
    return state[..., ::-1].copy()


def register(thetas) -> np.ndarray:
    """Product register ``prepare(t0) x prepare(t1) x ...``."""
    return prepare(np.asarray(thetas, dtype=float))


def is_normalized(state: np.ndarray, atol: float = NORM_ATOL) -> bool:
    norms = np.sum(np.square(state), axis=-1)
    return bool(np.all(np.abs(norms - 1.0) <= atol))


def all_ones_probability(reg: np.ndarray) -> np.ndarray | float:
    """Probability that every qubit of the register reads 1.

    With the register as the control set of an n-controlled NOT acting on a
    fresh ancilla, this is the probability of reading the ancilla as 1.
    """
    reg = np.asarray(reg, dtype=float)
    if reg.ndim < 2:
        raise DomainError("a register needs shape (..., n, 2)")
    p = np.prod(np.square(reg[..., 1]), axis=-1)
    return float(p) if p.ndim == 0 else p


@dataclass(frozen=True)
class ShotResult:
    ones: int
    shots: int

    def __post_init__(self):
        if self.shots < 1 or not 0 <= self.ones <= self.shots:
            raise DomainError(f"invalid shot counts {self.ones}/{self.shots}")

    @property
    def estimate(self) -> float:
        return self.ones / self.shots


def sample_ancilla(p: float, shots: int, rng: Seed = None) -> ShotResult:
    """Draw the number of ancilla-1 outcomes from ``Binomial(shots, p)``.

    Excursions of ``p`` outside [0, 1] up to 1e-9 are clamped (round-off from
    products of cosines); anything larger is an error.
    """
    ones = sample_counts(float(p), shots, rng)
    return ShotResult(int(ones), shots)


def sample_counts(p, shots: int, rng: Seed = None) -> np.ndarray:
    """Vectorised :func:`sample_ancilla`: one binomial count per entry of ``p``.

    Entries are drawn in C (row-major) order from a single stream.
    """
    if shots < 1:
        raise DomainError(f"shots must be >= 1, got {shots}")
    p = np.asarray(p, dtype=float)
    if np.any(p < -P_CLAMP) or np.any(p > 1 + P_CLAMP):
        raise DomainError(f"probability outside [0, 1]: {p.min()}..{p.max()}")
    return make_rng(rng).binomial(shots, np.clip(p, 0.0, 1.0))
