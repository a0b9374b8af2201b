"""Exact rational parsing, formatting, and small dense linear algebra.

Every quantity in this package is a ``fractions.Fraction``: arbitrary
precision, always in lowest terms, positive denominator.  Floats are
rejected at the boundary so no rounding error can enter the polyhedral
oracles.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def parse_rational(value: object, where: str = "value") -> Fraction:
    """Parse a rational from an int or a string like ``"3"``, ``"-1/2"``, ``"0.25"``.

    Floats are rejected: they carry binary rounding error and would poison
    exact tightness and rank tests downstream.
    """
    if isinstance(value, bool):
        raise ValueError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ValueError(f"{where}: floats are not exact; use a decimal or p/q string")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{where}: not a rational string: {value!r}") from exc
    raise ValueError(f"{where}: expected a rational string or integer, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Canonical string form: plain integer, else ``p/q`` in lowest terms."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def dot(coeffs: Sequence[Fraction], point: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for c, x in zip(coeffs, point):
        if c:
            total += c * x
    return total


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over the rationals by fraction-exact Gaussian elimination."""
    work = [list(row) for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        inv = work[row][col]
        work[row] = [v / inv for v in work[row]]
        for r in range(len(work)):
            if r != row and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[row])]
        row += 1
        rank += 1
        if row == len(work):
            break
    return rank


def solve_square(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve a square exact system; returns None when the matrix is singular."""
    n = len(matrix)
    work = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        inv = work[col][col]
        work[col] = [v / inv for v in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return [work[i][n] for i in range(n)]
