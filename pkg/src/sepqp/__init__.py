"""Simulator and trainer for a quantum perceptron built on separable states."""
from .densesim import dense_run
from .encoding import (DomainError, PatternCode, binary_to_code, code_to_binary,
                       code_to_decimal, digit_to_angle, parse_code)
from .perceptron import (MatchEstimate, PerceptronCircuit, emit_qasm, estimate_match,
                         exact_match_probability)
from .sepsim import ShotResult, sample_ancilla
from .trainer import (Case, TrainingConfig, TrainingTrace, classify_mismatch, fidelity,
                      run_batch, run_session)

__version__ = "0.1.0"

__all__ = [
    "Case", "DomainError", "MatchEstimate", "PatternCode", "PerceptronCircuit", "ShotResult",
    "TrainingConfig", "TrainingTrace", "binary_to_code", "classify_mismatch", "code_to_binary",
    "code_to_decimal", "dense_run", "digit_to_angle", "emit_qasm", "estimate_match",
    "exact_match_probability", "fidelity", "parse_code", "run_batch", "run_session",
    "sample_ancilla",
]
