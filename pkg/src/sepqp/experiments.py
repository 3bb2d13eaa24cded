"""Heatmap grids and the file formats the CLI writes."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import sepsim
from .densesim import dense_run
from .encoding import DomainError, bits_per_digit, decimal_to_code
from .perceptron import match_probabilities


@dataclass
class HeatmapGrid:
    """Match probabilities; row = input index k_i, column = weight index k_w."""

    m: int
    n: int
    values: np.ndarray
    shots: Optional[int] = None

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def diagonal(self) -> np.ndarray:
        return np.diag(self.values)

    def off_diagonal_max(self) -> float:
        mask = ~np.eye(self.size, dtype=bool)
        return float(self.values[mask].max()) if self.size > 1 else 0.0


def code_table(n: int, m: int) -> np.ndarray:
    """All length-``n`` codes as digit rows, ordered by decimal index."""
    k = bits_per_digit(m)
    idx = np.arange(m ** n)[:, None]
    shifts = k * np.arange(n - 1, -1, -1)
    return (idx >> shifts) & (m - 1)


def heatmap(n: int, m: int = 4, shots: Optional[int] = None,
            seed: sepsim.Seed = None) -> HeatmapGrid:
    """Exact probabilities, or shot estimates when ``shots`` is given."""
    if n < 1:
        raise DomainError("need at least one qubit")
    codes = code_table(n, m)
    exact = match_probabilities(codes[:, None, :], codes[None, :, :], m)
    if shots is None:
        return HeatmapGrid(m, n, exact)
    counts = sepsim.sample_counts(exact, shots, seed)
    return HeatmapGrid(m, n, counts / shots, shots)


def oracle_check(n: int, m: int = 4) -> float:
    """Largest |separable - dense| over every (input, weight) pair of length ``n``."""
    grid = heatmap(n, m).values
    worst = 0.0
    for ki in range(m ** n):
        a = decimal_to_code(ki, n, m)
        for kw in range(m ** n):
            b = decimal_to_code(kw, n, m)
            worst = max(worst, abs(grid[ki, kw] - dense_run(a, b)))
    return worst


def atomic_write(path: str, text: str):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    except OSError as exc:
        raise OSError(exc.errno, exc.strerror, path) from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def heatmap_csv(grid: HeatmapGrid) -> str:
    header = ["k_i\\k_w"] + [str(k) for k in range(grid.size)]
    lines = [",".join(header)]
    for k, row in enumerate(grid.values):
        lines.append(",".join([str(k)] + [f"{v:.6f}" for v in row]))
    return "\n".join(lines) + "\n"


def heatmap_ppm(grid: HeatmapGrid) -> str:
    """ASCII grayscale (P2) image, white = probability 1.

    Pixels are ``round(255 * p)``, half up, with ``p`` taken at the six
    decimals written to the CSV so both files agree on ties like p = 0.5.
    """
    p = np.round(np.clip(grid.values, 0.0, 1.0), 6)
    pixels = np.floor(255 * p + 0.5).astype(int)
    lines = ["P2", f"{grid.size} {grid.size}", "255"]
    lines += [" ".join(str(v) for v in row) for row in pixels]
    return "\n".join(lines) + "\n"


def jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def format_trace(trace) -> str:
    records = [s.to_record() for s in trace.steps]
    records.append({
        "summary": True,
        "converged": trace.converged,
        "total_steps": trace.total_steps,
        "initial_weight": str(trace.initial_weight),
        "final_weight": str(trace.final_weight),
        "final_fidelity": trace.final_fidelity,
    })
    return jsonl(records)
