"""Command-line experiment runner.

    sepqp heatmap --qubits 4 --out grid.csv --ppm grid.pgm
    sepqp train --target 1122 --seed 7 --out trace.jsonl
    sepqp batch --target 1122 --sessions 200 --out summary.json
    sepqp qasm --input 21 --weight 21 --out circuit.qasm
    sepqp match --input 1122 --weight 0122 --shots 1024 --oracle

Settings resolve as: command-line flag, then ``--config`` file (``key = value``
lines, ``#`` comments), then built-in default.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 training did not
converge under ``--strict``.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import experiments
from .densesim import dense_run
from .encoding import DomainError, parse_code
from .perceptron import (PerceptronCircuit, emit_qasm, estimate_match,
                         exact_match_probability)
from .qasm import check_qasm
from .trainer import TrainingConfig, run_batch, run_session

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NOT_CONVERGED = 3

DEFAULTS = {
    "seed": 0,
    "shots": None,
    "m": 4,
    "qubits": 2,
    "max_steps": 10000,
    "cycle_length": None,
    "tolerance_floor": 0.02,
    "z_sigma": 3.0,
    "sessions": 200,
    "workers": 1,
}
# commands where a missing --shots means 1024 rather than exact evaluation
TRAINING_SHOTS = 1024

_INT_KEYS = {"seed", "shots", "m", "qubits", "max_steps", "cycle_length", "sessions", "workers"}
_FLOAT_KEYS = {"tolerance_floor", "z_sigma"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def read_config(path: str) -> dict:
    settings = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            value = value.strip("'\"")
            if key in _INT_KEYS:
                settings[key] = int(value)
            elif key in _FLOAT_KEYS:
                settings[key] = float(value)
            else:
                settings[key] = value
    return settings


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    config = read_config(args.config) if args.config else {}
    for key, value in config.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="master seed (default 0)")
    common.add_argument("--shots", type=int, help="repetitions per circuit")
    common.add_argument("--m", type=int, help="alphabet size, a power of two (default 4)")
    common.add_argument("--config", help="key = value settings file")

    parser = _Parser(prog="sepqp", description="Separable-state quantum perceptron experiments")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("heatmap", parents=[common], help="match probabilities over all input/weight pairs")
    p.add_argument("--qubits", type=int, help="digits per pattern")
    p.add_argument("--exact", action="store_true", help="ignore --shots and write exact values")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--ppm", help="also write a P2 grayscale image")
    p.add_argument("--oracle", action="store_true", help="cross-check against the dense simulator")

    def training_flags(p):
        p.add_argument("--target", required=True, help="target code, e.g. 1122")
        p.add_argument("--max-steps", type=int)
        p.add_argument("--cycle-length", type=int)
        p.add_argument("--tolerance-floor", type=float)
        p.add_argument("--z-sigma", type=float)
        p.add_argument("--exact", action="store_true", help="use exact probabilities instead of shots")
        p.add_argument("--out", required=True)

    p = sub.add_parser("train", parents=[common], help="one training session as JSONL")
    training_flags(p)
    p.add_argument("--init", help="initial weight code (default: random)")
    p.add_argument("--estimate-fidelity", action="store_true",
                   help="also record a shot-estimated fidelity per step")
    p.add_argument("--strict", action="store_true", help="exit 3 if training does not converge")

    p = sub.add_parser("batch", parents=[common], help="many sessions summarised as JSON")
    training_flags(p)
    p.add_argument("--sessions", type=int)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("qasm", parents=[common], help="emit the circuit as OpenQASM 2.0")
    p.add_argument("--input", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("match", parents=[common], help="match probability for one pair")
    p.add_argument("--input", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--oracle", action="store_true", help="also report the dense-simulator value")
    return parser


def _training_config(args) -> TrainingConfig:
    shots = None if args.exact else (args.shots or TRAINING_SHOTS)
    return TrainingConfig(
        target=parse_code(args.target, args.m),
        shots=shots,
        tolerance_floor=args.tolerance_floor,
        z_sigma=args.z_sigma,
        cycle_length=args.cycle_length,
        max_steps=args.max_steps,
        seed=args.seed,
        initial_weight=parse_code(args.init, args.m) if getattr(args, "init", None) else None,
        estimate_fidelity=getattr(args, "estimate_fidelity", False),
    )


def cmd_heatmap(args) -> int:
    shots = None if args.exact else args.shots
    grid = experiments.heatmap(args.qubits, args.m, shots, args.seed)
    experiments.atomic_write(args.out, experiments.heatmap_csv(grid))
    if args.ppm:
        experiments.atomic_write(args.ppm, experiments.heatmap_ppm(grid))
    mode = "exact" if shots is None else f"{shots} shots"
    print(f"{grid.size}x{grid.size} grid ({mode}): diagonal min {grid.diagonal().min():.6f}, "
          f"off-diagonal max {grid.off_diagonal_max():.6f}")
    if args.oracle:
        print(f"oracle max deviation {experiments.oracle_check(args.qubits, args.m):.3e}")
    return 0


def cmd_train(args) -> int:
    trace = run_session(_training_config(args))
    experiments.atomic_write(args.out, experiments.format_trace(trace))
    print(f"converged={trace.converged} steps={trace.total_steps} "
          f"final_fidelity={trace.final_fidelity:.6f}")
    if args.strict and not trace.converged:
        return EXIT_NOT_CONVERGED
    return 0


def cmd_batch(args) -> int:
    if args.sessions < 1:
        raise UsageError("--sessions must be >= 1")
    summary = run_batch(_training_config(args), args.sessions, args.workers)
    experiments.atomic_write(args.out, json.dumps(summary.to_dict(), sort_keys=True, indent=1) + "\n")
    print(f"sessions={summary.sessions} convergence_rate={summary.convergence_rate:.3f} "
          f"mean_steps={summary.mean_steps:.2f} median_steps={summary.median_steps:.1f}")
    return 0


def cmd_qasm(args) -> int:
    circuit = PerceptronCircuit(parse_code(args.input, args.m), parse_code(args.weight, args.m))
    text = emit_qasm(circuit)
    counts = check_qasm(text)
    experiments.atomic_write(args.out, text)
    print(f"single-qubit gates: {counts.single_qubit}")
    print(f"multi-qubit gates: {counts.multi_qubit}")
    return 0


def cmd_match(args) -> int:
    circuit = PerceptronCircuit(parse_code(args.input, args.m), parse_code(args.weight, args.m))
    result = {"input": args.input, "weight": args.weight, "exact": exact_match_probability(circuit)}
    if args.shots:
        est = estimate_match(circuit, args.shots, args.seed)
        result.update(estimated=est.estimated, shots=est.shots)
    if args.oracle:
        result["dense"] = dense_run(circuit.input, circuit.weight)
    print(json.dumps(result, sort_keys=True))
    return 0


COMMANDS = {
    "heatmap": cmd_heatmap,
    "train": cmd_train,
    "batch": cmd_batch,
    "qasm": cmd_qasm,
    "match": cmd_match,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = resolve(parser.parse_args(argv))
        return COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"sepqp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        name = exc.filename or ""
        print(f"sepqp: I/O error: {name}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
