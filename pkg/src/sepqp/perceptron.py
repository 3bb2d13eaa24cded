"""The perceptron circuit: input layer, adjoint weight layer, X layer, one
n-controlled NOT onto an ancilla, ancilla measurement."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import sepsim
from .encoding import DomainError, PatternCode

MAX_QASM_QUBITS = 4
MCX_NAMES = {1: "cx", 2: "ccx", 3: "c3x", 4: "c4x"}


class UnsupportedSizeError(DomainError):
    pass


@dataclass(frozen=True)
class PerceptronCircuit:
    input: PatternCode
    weight: PatternCode

    def __post_init__(self):
        if len(self.input) != len(self.weight):
            raise DomainError(
                f"input has {len(self.input)} digits but weight has {len(self.weight)}")
        if self.input.m != self.weight.m:
            raise DomainError("input and weight use different alphabets")

    @property
    def n(self) -> int:
        return len(self.input)

    @property
    def m(self) -> int:
        return self.input.m


@dataclass(frozen=True)
class MatchEstimate:
    exact: float
    estimated: Optional[float] = None
    shots: Optional[int] = None

    def __post_init__(self):
        if (self.estimated is None) != (self.shots is None):
            raise ValueError("estimated and shots must be given together")


def match_probabilities(inputs, weights, m: int) -> np.ndarray:
    """Ancilla-1 probability for batches of digit arrays.

    ``inputs`` and ``weights`` are integer arrays whose last axis runs over
    qubits; leading axes broadcast. Each register goes through the full
    separable pipeline: prepare the input, rotate back by the weight angle,
    flip every qubit, read the all-ones probability.
    """
    inputs = np.asarray(inputs)
    weights = np.asarray(weights)
    reg = sepsim.prepare(inputs * np.pi / m)
    reg = sepsim.apply_rotation(reg, -(weights * np.pi / m))
    reg = sepsim.apply_x(reg)
    return sepsim.all_ones_probability(reg)


def exact_match_probability(c: PerceptronCircuit) -> float:
    return float(match_probabilities(c.input.digits, c.weight.digits, c.m))


def estimate_match(c: PerceptronCircuit, shots: int, seed: sepsim.Seed = None) -> MatchEstimate:
    exact = exact_match_probability(c)
    result = sepsim.sample_ancilla(exact, shots, seed)
    return MatchEstimate(exact, result.estimate, shots)


def _pi_multiple(frac: Fraction) -> str:
    if frac == 0:
        return "0"
    sign = "-" if frac < 0 else ""
    num, den = abs(frac.numerator), frac.denominator
    text = "pi" if num == 1 else f"{num}*pi"
    if den != 1:
        text += f"/{den}"
    return sign + text


def ry_angle_text(digit: int, m: int, sign: int = 1) -> str:
    """Text of ``ry`` angle ``sign * 2 * digit * pi / m`` (hardware convention)."""
    return _pi_multiple(Fraction(sign * 2 * digit, m))


def emit_qasm(c: PerceptronCircuit) -> str:
    """OpenQASM 2.0 program for the circuit; ancilla is ``q[n]``.

    ``ry(2*theta)`` prepares ``cos(theta)|0> + sin(theta)|1>``, so the input
    layer uses ``ry(2*theta_i)`` and the weight layer ``ry(-2*theta_w)``.
    """
    n = c.n
    if n > MAX_QASM_QUBITS:
        raise UnsupportedSizeError(
            f"QASM emission supports n <= {MAX_QASM_QUBITS} pattern qubits; "
            f"n = {n} would need a multi-controlled NOT decomposition, which is future work")
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{n + 1}];",
        "creg c[1];",
    ]
    lines += [f"ry({ry_angle_text(d, c.m)}) q[{q}];" for q, d in enumerate(c.input)]
    lines += [f"ry({ry_angle_text(d, c.m, -1)}) q[{q}];" for q, d in enumerate(c.weight)]
    lines += [f"x q[{q}];" for q in range(n)]
    qargs = ",".join(f"q[{q}]" for q in range(n + 1))
    lines.append(f"{MCX_NAMES[n]} {qargs};")
    lines.append(f"measure q[{n}] -> c[0];")
    return "\n".join(lines) + "\n"
