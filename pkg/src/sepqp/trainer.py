"""Hybrid training loop for a single target pattern.

Each step draws a random input, estimates the match probability of the
current weight from shots (``measured``) and compares it with the analytic
match probability against the target (``expected``). On a mismatch one weight
digit is changed:

* case 1, one value is (near) zero and the other is not: bump a random digit,
  chosen among the positions where weight and input are orthogonal when there
  are any (those positions are what forces ``measured`` to zero);
* case 2, ``measured > expected``: bump a random digit where weight == input;
* case 3, ``measured < expected``: copy the input digit into a random position
  where weight != input.

Bumping means ``(d + 1) mod m``. Training stops after ``cycle_length``
consecutive steps without a mismatch.

Every session owns one PCG64 stream seeded from ``SeedSequence([seed,
session])``, consumed in a fixed order per step: input digits, shot sample,
update index. The optional shot-estimated fidelity uses a separate spawned
stream so it never perturbs the training path.
"""
from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from . import sepsim
from .encoding import DomainError, PatternCode
from .perceptron import PerceptronCircuit, exact_match_probability

DEFAULT_SHOTS = 1024
MAX_DEFAULT_CYCLE = 64


class Case(str, Enum):
    NONE = "none"
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"


@dataclass(frozen=True)
class TrainingConfig:
    target: PatternCode
    shots: Optional[int] = DEFAULT_SHOTS  # None: use exact probabilities
    tolerance_floor: float = 0.02
    z_sigma: float = 3.0
    cycle_length: Optional[int] = None  # None: min(m**n, 64)
    max_steps: int = 10000
    seed: int = 0
    session: int = 0
    initial_weight: Optional[PatternCode] = None
    estimate_fidelity: bool = False

    def __post_init__(self):
        if self.shots is not None and self.shots < 1:
            raise DomainError("shots must be >= 1")
        if self.tolerance_floor <= 0 or self.z_sigma <= 0:
            raise DomainError("tolerance_floor and z_sigma must be positive")
        if self.max_steps < 1:
            raise DomainError("max_steps must be >= 1")
        if self.cycle_length is not None and self.cycle_length < 1:
            raise DomainError("cycle_length must be >= 1")
        if self.initial_weight is not None:
            _check_pair(self.initial_weight, self.target)

    @property
    def cycle(self) -> int:
        if self.cycle_length is not None:
            return self.cycle_length
        return min(self.target.m ** len(self.target), MAX_DEFAULT_CYCLE)


@dataclass(frozen=True)
class TrainingStep:
    step: int
    input: PatternCode
    weight_before: PatternCode
    measured: float
    expected: float
    case_applied: Case
    weight_after: PatternCode
    fidelity: float
    fidelity_estimated: Optional[float] = None

    def to_record(self) -> dict:
        rec = {
            "step": self.step,
            "input": str(self.input),
            "weight": str(self.weight_after),
            "weight_before": str(self.weight_before),
            "measured": self.measured,
            "expected": self.expected,
            "case": self.case_applied.value,
            "fidelity": self.fidelity,
        }
        if self.fidelity_estimated is not None:
            rec["fidelity_estimated"] = self.fidelity_estimated
        return rec


@dataclass
class TrainingTrace:
    initial_weight: PatternCode
    initial_fidelity: float
    steps: list[TrainingStep] = field(default_factory=list)
    converged: bool = False

    @property
    def total_steps(self) -> int:
        return len(self.steps)

    @property
    def final_weight(self) -> PatternCode:
        return self.steps[-1].weight_after if self.steps else self.initial_weight

    @property
    def final_fidelity(self) -> float:
        return self.steps[-1].fidelity if self.steps else self.initial_fidelity

    @property
    def steps_to_target(self) -> int:
        """Steps taken before the fidelity reached 1 for good."""
        last = 0
        for s in self.steps:
            if s.fidelity < 1.0:
                last = s.step
        if self.final_fidelity < 1.0:
            return self.total_steps
        return last + 1 if last or self.initial_fidelity < 1.0 else 0

    def fidelity_curve(self) -> list[float]:
        """Fidelity after 0, 1, ..., total_steps steps."""
        return [self.initial_fidelity] + [s.fidelity for s in self.steps]


def _check_pair(a: PatternCode, b: PatternCode):
    if len(a) != len(b) or a.m != b.m:
        raise DomainError("codes must have equal length and alphabet")


def overlap_probability(a: PatternCode, b: PatternCode) -> float:
    """``prod cos^2((a_i - b_i) * pi / m)``, evaluated classically."""
    _check_pair(a, b)
    p = 1.0
    for x, y in zip(a, b):
        p *= math.cos((x - y) * math.pi / a.m) ** 2
    return p


def expected_output(input: PatternCode, target: PatternCode) -> float:
    return overlap_probability(input, target)


def fidelity(weight: PatternCode, target: PatternCode) -> float:
    return overlap_probability(weight, target)


def tolerance(measured: float, shots: Optional[int], cfg: TrainingConfig) -> float:
    if shots is None:
        return cfg.tolerance_floor
    band = cfg.z_sigma * math.sqrt(max(measured * (1.0 - measured), 0.0) / shots)
    return max(cfg.tolerance_floor, band)


def classify_mismatch(measured: float, expected: float, shots: Optional[int],
                      cfg: TrainingConfig) -> Case:
    """Return ``Case.NONE`` when the estimate agrees with the expectation."""
    tau = tolerance(measured, shots, cfg)
    if abs(measured - expected) <= tau:
        return Case.NONE
    if (expected <= tau) != (measured <= tau):
        return Case.CASE1
    return Case.CASE2 if measured > expected else Case.CASE3


def orthogonal_positions(weight: PatternCode, input: PatternCode) -> list[int]:
    """Positions whose digits differ by exactly ``m / 2`` (zero overlap)."""
    half = weight.m // 2
    return [k for k in range(len(weight)) if (weight[k] - input[k]) % weight.m == half]


def apply_update(weight: PatternCode, input: PatternCode, case: Case,
                 rng: sepsim.Seed = None) -> PatternCode:
    _check_pair(weight, input)
    if case is Case.NONE:
        raise DomainError("no update for a matching step")
    rng = sepsim.make_rng(rng)
    m = weight.m
    if case is Case.CASE1:
        candidates = orthogonal_positions(weight, input)
    elif case is Case.CASE2:
        candidates = [k for k in range(len(weight)) if weight[k] == input[k]]
    else:
        candidates = [k for k in range(len(weight)) if weight[k] != input[k]]
    if not candidates:
        # fall back to a bump anywhere
        case = Case.CASE1
        candidates = list(range(len(weight)))
    k = candidates[int(rng.integers(len(candidates)))]
    if case is Case.CASE3:
        return weight.replace_digit(k, input[k])
    return weight.replace_digit(k, (weight[k] + 1) % m)


def _random_code(rng: np.random.Generator, n: int, m: int) -> PatternCode:
    return PatternCode(tuple(int(d) for d in rng.integers(0, m, size=n)), m)


def session_streams(seed: int, session: int) -> tuple[np.random.Generator, np.random.Generator]:
    train_ss, fid_ss = np.random.SeedSequence([seed, session]).spawn(2)
    return (np.random.Generator(np.random.PCG64(train_ss)),
            np.random.Generator(np.random.PCG64(fid_ss)))


def run_session(cfg: TrainingConfig) -> TrainingTrace:
    target = cfg.target
    n, m = len(target), target.m
    rng, fid_rng = session_streams(cfg.seed, cfg.session)
    weight = cfg.initial_weight or _random_code(rng, n, m)
    trace = TrainingTrace(weight, fidelity(weight, target))
    clean = 0
    for step in range(1, cfg.max_steps + 1):
        x = _random_code(rng, n, m)
        circuit = PerceptronCircuit(x, weight)
        if cfg.shots is None:
            measured = exact_match_probability(circuit)
        else:
            p = exact_match_probability(circuit)
            measured = sepsim.sample_ancilla(p, cfg.shots, rng).estimate
        expected = expected_output(x, target)
        case = classify_mismatch(measured, expected, cfg.shots, cfg)
        new_weight = weight if case is Case.NONE else apply_update(weight, x, case, rng)
        f = fidelity(new_weight, target)
        f_est = None
        if cfg.estimate_fidelity:
            f_est = sepsim.sample_ancilla(f, cfg.shots or DEFAULT_SHOTS, fid_rng).estimate
        trace.steps.append(TrainingStep(step, x, weight, measured, expected, case,
                                        new_weight, f, f_est))
        weight = new_weight
        clean = clean + 1 if case is Case.NONE else 0
        if clean >= cfg.cycle:
            trace.converged = True
            break
    return trace


@dataclass
class BatchSummary:
    sessions: int
    convergence_rate: float
    mean_steps: float
    median_steps: float
    max_steps_observed: int
    mean_fidelity_curve: list[float]
    step_counts: list[int]
    mean_steps_to_target: float

    def to_dict(self) -> dict:
        return {
            "sessions": self.sessions,
            "convergence_rate": self.convergence_rate,
            "mean_steps": self.mean_steps,
            "median_steps": self.median_steps,
            "max_steps_observed": self.max_steps_observed,
            "mean_steps_to_target": self.mean_steps_to_target,
            "mean_fidelity_curve": self.mean_fidelity_curve,
        }


def summarize(traces: list[TrainingTrace]) -> BatchSummary:
    """Aggregate traces; shorter fidelity curves are padded with their final value."""
    counts = [t.total_steps for t in traces]
    curves = [t.fidelity_curve() for t in traces]
    length = max(len(c) for c in curves)
    padded = np.array([c + [c[-1]] * (length - len(c)) for c in curves])
    return BatchSummary(
        sessions=len(traces),
        convergence_rate=sum(t.converged for t in traces) / len(traces),
        mean_steps=statistics.fmean(counts),
        median_steps=float(statistics.median(counts)),
        max_steps_observed=max(counts),
        mean_fidelity_curve=[float(v) for v in padded.mean(axis=0)],
        step_counts=counts,
        mean_steps_to_target=statistics.fmean(t.steps_to_target for t in traces),
    )


def run_batch(cfg: TrainingConfig, sessions: int, workers: int = 1) -> BatchSummary:
    """Run ``sessions`` independent sessions seeded ``(cfg.seed, index)``."""
    if sessions < 1:
        raise DomainError("sessions must be >= 1")
    configs = [replace(cfg, session=i) for i in range(sessions)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(run_session, configs))
    else:
        traces = [run_session(c) for c in configs]
    return summarize(traces)
