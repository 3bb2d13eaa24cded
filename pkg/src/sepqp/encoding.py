"""Pixel strings, N-ary digit codes and rotation angles.

A binary pattern is cut left to right into blocks of ``k = log2(m)`` bits and
each block is read as a big-endian integer, giving one digit per qubit. Digit
``j`` is stored on its qubit as the angle ``j * pi / m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

DEFAULT_M = 4


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def bits_per_digit(m: int) -> int:
    """Return ``k`` with ``m == 2**k``; raise if ``m`` is not such a power."""
    if not isinstance(m, int) or m < 2 or m & (m - 1):
        raise DomainError(f"alphabet size must be a power of two >= 2, got {m!r}")
    return m.bit_length() - 1


@dataclass(frozen=True)
class PatternCode:
    """A sequence of base-``m`` digits, one per qubit."""

    digits: tuple[int, ...]
    m: int = DEFAULT_M

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        bits_per_digit(self.m)
        if not self.digits:
            raise DomainError("a pattern code needs at least one digit")
        for d in self.digits:
            if not 0 <= d < self.m:
                raise DomainError(f"digit {d} outside [0, {self.m})")

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, k):
        return self.digits[k]

    def __str__(self) -> str:
        return format_code(self)

    def replace_digit(self, k: int, value: int) -> "PatternCode":
        digits = list(self.digits)
        digits[k] = value
        return PatternCode(tuple(digits), self.m)

    def angles(self) -> list[float]:
        return [digit_to_angle(d, self.m) for d in self.digits]


BinaryPattern = Union[str, Sequence[int]]


def _bits(b: BinaryPattern) -> list[int]:
    if isinstance(b, str):
        if not b or set(b) - {"0", "1"}:
            raise DomainError(f"binary pattern must be a nonempty 0/1 string, got {b!r}")
        return [int(c) for c in b]
    bits = [int(x) for x in b]
    if not bits or any(x not in (0, 1) for x in bits):
        raise DomainError(f"binary pattern must be nonempty with 0/1 entries, got {b!r}")
    return bits


def digit_to_angle(j: int, m: int = DEFAULT_M) -> float:
    """Encoding angle of digit ``j`` in an ``m``-letter alphabet.

    ``m`` need not be a power of two here.
    """
    if m < 2:
        raise DomainError(f"alphabet size must be >= 2, got {m}")
    if not 0 <= j < m:
        raise DomainError(f"digit {j} outside [0, {m})")
    return j * math.pi / m


def binary_to_code(b: BinaryPattern, m: int = DEFAULT_M) -> PatternCode:
    """Group bits into big-endian ``log2(m)``-bit digits.

    A short final block is padded with trailing zeros, so ``"101"`` becomes
    ``"1010"`` before conversion when ``m == 4``.
    """
    k = bits_per_digit(m)
    bits = _bits(b)
    bits += [0] * (-len(bits) % k)
    digits = []
    for start in range(0, len(bits), k):
        value = 0
        for bit in bits[start:start + k]:
            value = (value << 1) | bit
        digits.append(value)
    return PatternCode(tuple(digits), m)


def code_to_binary(c: PatternCode) -> str:
    k = bits_per_digit(c.m)
    return "".join(format(d, f"0{k}b") for d in c.digits)


def code_to_decimal(c: PatternCode) -> int:
    """Integer value of the code's bit string; the heatmap axis index."""
    k = bits_per_digit(c.m)
    value = 0
    for d in c.digits:
        value = (value << k) | d
    return value


def decimal_to_code(value: int, n: int, m: int = DEFAULT_M) -> PatternCode:
    """Inverse of :func:`code_to_decimal` for codes of length ``n``."""
    k = bits_per_digit(m)
    if not 0 <= value < 1 << (k * n):
        raise DomainError(f"{value} does not fit in {n} base-{m} digits")
    digits = [(value >> (k * (n - 1 - i))) & (m - 1) for i in range(n)]
    return PatternCode(tuple(digits), m)


def all_codes(n: int, m: int = DEFAULT_M) -> Iterable[PatternCode]:
    """Every length-``n`` code in increasing decimal order."""
    for value in range(m ** n):
        yield decimal_to_code(value, n, m)


def parse_code(text: str, m: int = DEFAULT_M) -> PatternCode:
    """Parse ``"1122"`` (single-character digits) or ``"10,3,15"``.

    Comma-separated form is required once digits exceed 9.
    """
    text = text.strip()
    if not text:
        raise DomainError("empty pattern code")
    try:
        if "," in text:
            digits = [int(part) for part in text.split(",")]
        else:
            digits = [int(ch) for ch in text]
    except ValueError:
        raise DomainError(f"cannot parse pattern code {text!r}") from None
    return PatternCode(tuple(digits), m)


def format_code(c: PatternCode) -> str:
    if c.m <= 10:
        return "".join(str(d) for d in c.digits)
    return ",".join(str(d) for d in c.digits)
