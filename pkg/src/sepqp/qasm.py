"""Grammar-level checker and gate counter for the OpenQASM 2.0 subset we emit.

Not a general parser: it accepts the header, register declarations, the
qelib1 gates listed in ``GATES``, ``barrier`` and ``measure``, and rejects
anything else.
"""
from __future__ import annotations

import ast
import math
import re
from collections import Counter
from dataclasses import dataclass, field

# name -> (parameter count, qubit count)
GATES = {
    "x": (0, 1),
    "ry": (1, 1),
    "rx": (1, 1),
    "rz": (1, 1),
    "h": (0, 1),
    "cx": (0, 2),
    "ccx": (0, 3),
    "c3x": (0, 4),
    "c4x": (0, 5),
}

_IDENT = r"[a-z][A-Za-z0-9_]*"
_QARG = re.compile(rf"^({_IDENT})\[(\d+)\]$")
_DECL = re.compile(rf"^(qreg|creg)\s+({_IDENT})\[(\d+)\]$")
_GATE = re.compile(rf"^({_IDENT})\s*(?:\((.*)\))?\s+(.+)$")
_MEASURE = re.compile(rf"^measure\s+({_IDENT}\[\d+\])\s*->\s*({_IDENT}\[\d+\])$")


class QasmError(ValueError):
    pass


@dataclass
class GateCounts:
    by_name: Counter = field(default_factory=Counter)
    single_qubit: int = 0
    multi_qubit: int = 0
    measurements: int = 0


def _eval_param(expr: str) -> float:
    """Evaluate an angle expression built from numbers, ``pi``, + - * /."""
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError:
        raise QasmError(f"bad parameter expression {expr!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
            l, r = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return l + r
            if isinstance(node.op, ast.Sub):
                return l - r
            if isinstance(node.op, ast.Mult):
                return l * r
            return l / r
        raise QasmError(f"unsupported token in parameter {expr!r}")

    return ev(tree)


def parse_statements(text: str) -> list[str]:
    lines = [re.sub(r"//.*", "", line).strip() for line in text.split("\n")]
    body = " ".join(line for line in lines if line)
    if not body.endswith(";"):
        raise QasmError("program must end with ';'")
    return [s.strip() for s in body.split(";")[:-1]]


def check_qasm(text: str) -> GateCounts:
    """Validate ``text`` and return its gate counts; raise QasmError if malformed."""
    stmts = parse_statements(text)
    if len(stmts) < 2 or stmts[0] != "OPENQASM 2.0":
        raise QasmError("missing 'OPENQASM 2.0;' header")
    if stmts[1] != 'include "qelib1.inc"':
        raise QasmError('missing \'include "qelib1.inc";\'')
    qregs: dict[str, int] = {}
    cregs: dict[str, int] = {}
    counts = GateCounts()

    def resolve(arg: str, regs: dict[str, int]) -> tuple[str, int]:
        m = _QARG.match(arg.strip())
        if not m or m.group(1) not in regs:
            raise QasmError(f"unknown register reference {arg!r}")
        index = int(m.group(2))
        if index >= regs[m.group(1)]:
            raise QasmError(f"index out of range in {arg!r}")
        return m.group(1), index

    for stmt in stmts[2:]:
        if m := _DECL.match(stmt):
            kind, name, size = m.group(1), m.group(2), int(m.group(3))
            if size < 1 or name in qregs or name in cregs:
                raise QasmError(f"bad declaration {stmt!r}")
            (qregs if kind == "qreg" else cregs)[name] = size
            continue
        if m := _MEASURE.match(stmt):
            resolve(m.group(1), qregs)
            resolve(m.group(2), cregs)
            counts.measurements += 1
            continue
        if stmt.startswith("barrier"):
            for arg in stmt[len("barrier"):].split(","):
                resolve(arg, qregs)
            continue
        m = _GATE.match(stmt)
        if not m or m.group(1) not in GATES:
            raise QasmError(f"unrecognised statement {stmt!r}")
        name, params, args = m.group(1), m.group(2), m.group(3)
        n_params, n_qubits = GATES[name]
        plist = [p for p in params.split(",")] if params is not None else []
        if len(plist) != n_params:
            raise QasmError(f"{name} takes {n_params} parameter(s): {stmt!r}")
        for p in plist:
            _eval_param(p)
        qargs = [resolve(a, qregs) for a in args.split(",")]
        if len(qargs) != n_qubits or len(set(qargs)) != n_qubits:
            raise QasmError(f"{name} needs {n_qubits} distinct qubit(s): {stmt!r}")
        counts.by_name[name] += 1
        if n_qubits == 1:
            counts.single_qubit += 1
        else:
            counts.multi_qubit += 1
    return counts


def gate_parameters(text: str, name: str) -> list[tuple[int, float]]:
    """``(qubit index, angle)`` for every occurrence of a one-parameter gate."""
    out = []
    for stmt in parse_statements(text):
        m = _GATE.match(stmt)
        if m and m.group(1) == name and m.group(2) is not None:
            q = _QARG.match(m.group(3).strip())
            out.append((int(q.group(2)), _eval_param(m.group(2))))
    return out
