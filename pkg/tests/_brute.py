"""Independent brute-force oracles used only by the tests.

These deliberately avoid the production code paths they are checking:
path enumeration instead of label-setting search, combinatorial basis
enumeration instead of incremental insertion, and a full pair sweep
instead of the screened separation walk.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from anglecuts.bounds import global_big_m
from anglecuts.cuts import build_cpvi, cpvi_violation
from anglecuts.graph import split_cycle


def brute_shortest_path(net, m, n, active=None):
    """Minimum weight over all simple paths, by exhaustive DFS."""
    allowed = set(range(len(net.lines))) if active is None else set(active)
    best = [None]

    def walk(bus, seen, acc):
        if bus == n:
            if best[0] is None or acc < best[0]:
                best[0] = acc
            return
        for idx in net.adjacency[bus]:
            if idx not in allowed:
                continue
            other = net.lines[idx].other(bus)
            if other in seen:
                continue
            walk(other, seen | {other}, acc + net.lines[idx].weight)

    walk(m, {m}, Fraction(0))
    return best[0]


def _solve(matrix, rhs):
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


def brute_vertices(rows, dim):
    """Every vertex by enumerating all dim-subsets of tight rows."""
    found = set()
    for subset in itertools.combinations(range(len(rows)), dim):
        matrix = [list(rows[k][0]) for k in subset]
        rhs = [rows[k][1] for k in subset]
        point = _solve(matrix, rhs)
        if point is None:
            continue
        if all(
            sum((c * x for c, x in zip(coeffs, point)), Fraction(0)) <= b
            for coeffs, b in rows
        ):
            found.add(tuple(point))
    return sorted(found)


def exhaustive_cpvi(net, cycles, pt, tolerance):
    """All cycles times all pairs, no screening, no stopping rule."""
    big_m = global_big_m(net)
    found = {}
    for cycle in cycles:
        buses = sorted(cycle.buses, key=net.bus_index.__getitem__)
        for i in range(len(buses)):
            for j in range(i + 1, len(buses)):
                pair = split_cycle(net, cycle, buses[i], buses[j])
                cut = build_cpvi(pair, big_m)
                violation = cpvi_violation(cut, pt)
                if violation > tolerance:
                    found[(cycle.lines, frozenset((buses[i], buses[j])))] = (cut, violation)
    return found
