"""Exact two-phase simplex over the rationals.

Dense tableau, Bland's smallest-index pivoting rule, so every run
terminates and every comparison is exact.  Built for desk-scale linear
programs (tens of rows); all the polyhedral certificates and the
brute-force switching enumeration sit on top of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["LPResult", "solve_linear_program"]

Row = tuple[Sequence[Fraction], Fraction]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible", or "unbounded"
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pivot_row = tableau[row]
    inv = pivot_row[col]
    if inv != 1:
        tableau[row] = pivot_row = [v / inv for v in pivot_row]
    for r, other in enumerate(tableau):
        if r == row:
            continue
        factor = other[col]
        if factor:
            tableau[r] = [a - factor * b for a, b in zip(other, pivot_row)]
    basis[row] = col


def _run(tableau: list[list[Fraction]], basis: list[int], allowed: int) -> str:
    """Minimize with the cost row last; only columns < allowed may enter."""
    m = len(tableau) - 1
    while True:
        cost = tableau[m]
        enter = next((j for j in range(allowed) if cost[j] < 0), None)
        if enter is None:
            return "optimal"
        leave = None
        best: Fraction | None = None
        for r in range(m):
            coeff = tableau[r][enter]
            if coeff > 0:
                ratio = tableau[r][-1] / coeff
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best = ratio
                    leave = r
        if leave is None:
            return "unbounded"
        _pivot(tableau, basis, leave, enter)


def solve_linear_program(
    n_vars: int,
    ineqs: Sequence[Row],
    eqs: Sequence[Row] = (),
    objective: Sequence[Fraction] | None = None,
    minimize: bool = True,
    nonneg: bool = False,
) -> LPResult:
    """Optimize a linear objective over {a.x <= b} and {a.x == b} rows.

    Variables are free unless nonneg is set (free variables are split
    internally).  Returns an exact optimal value and a witness point, or
    the infeasible/unbounded status.
    """
    obj = [Fraction(c) for c in (objective or [Fraction(0)] * n_vars)]
    if not minimize:
        obj = [-c for c in obj]

    width = n_vars if nonneg else 2 * n_vars

    def expand(coeffs: Sequence[Fraction]) -> list[Fraction]:
        if nonneg:
            return [Fraction(c) for c in coeffs]
        out = []
        for c in coeffs:
            out.append(Fraction(c))
        for c in coeffs:
            out.append(Fraction(-c))
        return out

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    senses: list[str] = []
    for coeffs, b in ineqs:
        rows.append(expand(coeffs))
        rhs.append(Fraction(b))
        senses.append("<=")
    for coeffs, b in eqs:
        rows.append(expand(coeffs))
        rhs.append(Fraction(b))
        senses.append("==")

    m = len(rows)
    n_slack = sum(1 for s in senses if s == "<=")
    slack_base = width
    total_structural = width + n_slack

    body: list[list[Fraction]] = []
    slack_col = 0
    slack_of_row: list[int | None] = []
    for i in range(m):
        row = rows[i] + [Fraction(0)] * n_slack
        if senses[i] == "<=":
            row[slack_base + slack_col] = Fraction(1)
            slack_of_row.append(slack_base + slack_col)
            slack_col += 1
        else:
            slack_of_row.append(None)
        if rhs[i] < 0:
            row = [-v for v in row]
            rhs[i] = -rhs[i]
        body.append(row)

    # artificials for rows whose slack is absent or was negated
    basis: list[int] = []
    art_cols: list[int] = []
    tableau: list[list[Fraction]] = []
    next_art = total_structural
    for i in range(m):
        row = body[i]
        sc = slack_of_row[i]
        if sc is not None and row[sc] == 1:
            basis.append(sc)
            tableau.append(row + [rhs[i]])
        else:
            art_cols.append(next_art)
            basis.append(next_art)
            tableau.append(row + [rhs[i]])
            next_art += 1
    n_art = len(art_cols)
    total = total_structural + n_art
    for i in range(m):
        pad = [Fraction(0)] * n_art
        if basis[i] >= total_structural:
            pad[basis[i] - total_structural] = Fraction(1)
        tableau[i] = tableau[i][:-1] + pad + [tableau[i][-1]]

    if n_art:
        # phase 1: drive the artificial sum to zero
        cost = [Fraction(0)] * (total + 1)
        for c in art_cols:
            cost[c] = Fraction(1)
        for i in range(m):
            if basis[i] >= total_structural:
                cost = [a - b for a, b in zip(cost, tableau[i])]
        tableau.append(cost)
        _run(tableau, basis, total_structural)  # artificials may not re-enter
        if tableau[-1][-1] != 0:
            return LPResult("infeasible")
        tableau.pop()
        # pivot lingering zero-value artificials out where possible
        for i in range(m):
            if basis[i] >= total_structural:
                col = next((j for j in range(total_structural) if tableau[i][j] != 0), None)
                if col is not None:
                    _pivot(tableau, basis, i, col)
        keep = [i for i in range(m) if basis[i] < total_structural]
        tableau = [tableau[i] for i in keep]
        basis = [basis[i] for i in keep]
        m = len(basis)

    # phase 2 cost row: reduced costs of the real objective
    full_cost = expand(obj) + [Fraction(0)] * (len(tableau[0]) - width if tableau else 1)
    if tableau:
        full_cost = full_cost[: len(tableau[0])]
    else:
        full_cost = expand(obj) + [Fraction(0)]
    cost = list(full_cost)
    for i in range(m):
        cb = full_cost[basis[i]]
        if cb:
            cost = [a - cb * b for a, b in zip(cost, tableau[i])]
    tableau.append(cost)
    status = _run(tableau, basis, total_structural if m else width)
    if status == "unbounded":
        return LPResult("unbounded")

    values = [Fraction(0)] * (len(tableau[0]) - 1)
    for i in range(m):
        values[basis[i]] = tableau[i][-1]
    if nonneg:
        point = tuple(values[:n_vars])
    else:
        point = tuple(values[j] - values[n_vars + j] for j in range(n_vars))
    value = sum((c * x for c, x in zip(obj, point)), Fraction(0))
    if not minimize:
        value = -value
    return LPResult("optimal", value, point)
