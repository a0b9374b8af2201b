"""Exact brute-force machinery certifying the polyhedral claims at desk scale.

Integer-point enumeration for a split cycle, exact vertex enumeration by
incremental halfspace insertion, affine-rank certificates, hull-equality
checks, and an exhaustive switching enumeration that solves one exact LP
per topology.  Hard caps raise CapExceededError rather than degrade.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cuts import CutCPVI, CutCVI
from .errors import (
    AllPatternsInfeasibleError,
    CapExceededError,
    InfeasibleError,
    UnboundedError,
)
from .extended import ExtendedSystem
from .graph import CyclePathPair
from .network import Network
from .rational import dot, format_rational, matrix_rank
from .simplex import solve_linear_program

__all__ = [
    "HPolytope",
    "Claim",
    "CertificateReport",
    "integer_points",
    "enumerate_vertices",
    "affine_rank",
    "rational_simplex",
    "facet_certificate",
    "full_dimension_certificate",
    "hull_equality",
    "local_idealness_certificate",
    "cpvi_validity_certificate",
    "pair_relaxation_rows",
    "candidate_hull",
    "extended_polytope",
    "point_in_hull",
    "brute_force_dcots",
    "DcotsResult",
]

VERTEX_DIM_CAP = 12
VERTEX_ROW_CAP = 40
INTEGER_POINT_CAP = 20
HULL_CYCLE_CAP = 6
BRUTE_FORCE_CAP = 12


@dataclass(frozen=True)
class HPolytope:
    """Rows a.x <= b over a fixed dimension, exact rationals only."""

    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    dim: int

    def __post_init__(self):
        for coeffs, _ in self.rows:
            if len(coeffs) != self.dim:
                raise ValueError("row width does not match the polytope dimension")

    def contains(self, point: Sequence[Fraction]) -> bool:
        return all(dot(coeffs, point) <= b for coeffs, b in self.rows)

    def first_violated(self, point: Sequence[Fraction]):
        for k, (coeffs, b) in enumerate(self.rows):
            if dot(coeffs, point) > b:
                return k
        return None


class Claim(enum.Enum):
    VALIDITY = "validity"
    FACET_RANK = "facet_rank"
    LOCAL_IDEAL = "local_ideal"
    HULL_EQUALITY = "hull_equality"
    FULL_DIMENSION = "full_dimension"


@dataclass(frozen=True)
class CertificateReport:
    claim: Claim
    passed: bool
    witness: dict | None = None

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("a failed certificate must carry a witness")

    def to_json(self) -> dict:
        return {"claim": self.claim.value, "passed": self.passed, "witness": self.witness}


def _point_json(point: Iterable[Fraction]) -> list[str]:
    return [format_rational(x) for x in point]


# ---------------------------------------------------------------------------
# integer points of the per-pair relaxation


def implied_angle_bound(net: Network, pair: CyclePathPair, big_m: Fraction, y: Mapping[int, int]) -> Fraction:
    """Tightest of the three row families at a fixed activity pattern."""
    short = pair.shorter.total_weight + sum(
        ((big_m - net.lines[e].weight) * (1 - y[e]) for e in pair.shorter.lines), Fraction(0)
    )
    long_ = pair.longer.total_weight + sum(
        ((big_m - net.lines[e].weight) * (1 - y[e]) for e in pair.longer.lines), Fraction(0)
    )
    return min(short, long_, big_m)


def integer_points(net: Network, pair: CyclePathPair, big_m: Fraction) -> list[tuple[Fraction, tuple[int, ...]]]:
    """All integer-feasible extremes: per activity pattern, the exact
    implied bound at both signs plus an interior point at zero.

    Points are (angle difference, activity bits in cycle-line order).
    """
    size = len(pair.cycle.lines)
    if size > INTEGER_POINT_CAP:
        raise CapExceededError(f"cycle size {size} exceeds the integer enumeration cap {INTEGER_POINT_CAP}")
    points = []
    for bits in itertools.product((0, 1), repeat=size):
        y = dict(zip(pair.cycle.lines, bits))
        bound = implied_angle_bound(net, pair, big_m, y)
        points.append((bound, bits))
        points.append((-bound, bits))
        points.append((Fraction(0), bits))
    return points


# ---------------------------------------------------------------------------
# exact vertex enumeration by incremental halfspace insertion


def _propagated_box(p: HPolytope) -> tuple[list[Fraction | None], list[Fraction | None]]:
    lows: list[Fraction | None] = [None] * p.dim
    highs: list[Fraction | None] = [None] * p.dim
    for _ in range(p.dim + 2):
        changed = False
        for coeffs, b in p.rows:
            support = [j for j in range(p.dim) if coeffs[j] != 0]
            for j in support:
                rest = Fraction(0)
                ok = True
                for k in support:
                    if k == j:
                        continue
                    ck = coeffs[k]
                    lb = lows[k] if ck > 0 else highs[k]
                    if lb is None:
                        ok = False
                        break
                    rest += ck * lb
                if not ok:
                    continue
                limit = (b - rest) / coeffs[j]
                if coeffs[j] > 0:
                    if highs[j] is None or limit < highs[j]:
                        highs[j] = limit
                        changed = True
                else:
                    if lows[j] is None or limit > lows[j]:
                        lows[j] = limit
                        changed = True
        if not changed:
            break
    return lows, highs


def _lp_bound(p: HPolytope, j: int, maximize: bool) -> Fraction:
    objective = [Fraction(0)] * p.dim
    objective[j] = Fraction(1)
    result = solve_linear_program(p.dim, p.rows, [], objective, minimize=not maximize)
    if result.status == "infeasible":
        raise InfeasibleError("polytope is empty")
    if result.status == "unbounded":
        raise UnboundedError(f"polytope is unbounded in coordinate {j}")
    return result.value


def enumerate_vertices(p: HPolytope) -> list[tuple[Fraction, ...]]:
    """All vertices of a bounded polytope, exactly.

    Starts from a strictly larger simplex and inserts the rows one at a
    time; candidate vertices come from edges crossing each new
    hyperplane, with edges recognized by the combinatorial adjacency
    test (no third vertex's tight set contains the pair's common tight
    set).  Output is sorted and deduplicated.
    """
    if p.dim > VERTEX_DIM_CAP:
        raise CapExceededError(f"dimension {p.dim} exceeds the vertex enumeration cap {VERTEX_DIM_CAP}")
    if len(p.rows) > VERTEX_ROW_CAP:
        raise CapExceededError(f"{len(p.rows)} rows exceed the vertex enumeration cap {VERTEX_ROW_CAP}")

    lows, highs = _propagated_box(p)
    try:
        for j in range(p.dim):
            if lows[j] is None:
                lows[j] = _lp_bound(p, j, maximize=False)
            if highs[j] is None:
                highs[j] = _lp_bound(p, j, maximize=True)
    except InfeasibleError:
        return []

    # seed simplex strictly containing the box, so its rows are never
    # tight at a true vertex
    lo = [v - 1 for v in lows]
    reach = sum((h - l for h, l in zip(highs, lo)), Fraction(0)) + 1
    seed_rows: list[tuple[tuple[Fraction, ...], Fraction]] = []
    for j in range(p.dim):
        coeffs = tuple(Fraction(-1) if k == j else Fraction(0) for k in range(p.dim))
        seed_rows.append((coeffs, -lo[j]))
    seed_rows.append((tuple(Fraction(1) for _ in range(p.dim)), sum(lo, Fraction(0)) + reach))

    corner = tuple(lo)
    vertices: dict[tuple[Fraction, ...], int] = {}
    all_rows: list[tuple[tuple[Fraction, ...], Fraction]] = list(seed_rows)

    def tight_mask(point: tuple[Fraction, ...]) -> int:
        mask = 0
        for k, (coeffs, b) in enumerate(all_rows):
            if dot(coeffs, point) == b:
                mask |= 1 << k
        return mask

    vertices[corner] = tight_mask(corner)
    for j in range(p.dim):
        spike = tuple(lo[k] + (reach if k == j else 0) for k in range(p.dim))
        vertices[spike] = tight_mask(spike)

    for coeffs, b in p.rows:
        all_rows.append((coeffs, b))
        bit = 1 << (len(all_rows) - 1)
        plus: list[tuple[tuple[Fraction, ...], int, Fraction]] = []
        minus: list[tuple[tuple[Fraction, ...], int, Fraction]] = []
        kept: dict[tuple[Fraction, ...], int] = {}
        for point, mask in vertices.items():
            slack = b - dot(coeffs, point)
            if slack > 0:
                plus.append((point, mask, slack))
                kept[point] = mask
            elif slack == 0:
                kept[point] = mask | bit
            else:
                minus.append((point, mask, slack))
        if not minus:
            vertices = kept
            continue
        masks = list(vertices.values())
        need = p.dim - 1
        for u, mu, su in plus:
            for v, mv, sv in minus:
                common = mu & mv
                if common.bit_count() < need:
                    continue
                if any(w & common == common for w in masks if w != mu and w != mv):
                    continue
                t = su / (su - sv)
                point = tuple(a + t * (c - a) for a, c in zip(u, v))
                if point not in kept:
                    kept[point] = tight_mask(point)
        vertices = kept
        if not vertices:
            return []
    return sorted(vertices)


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Rank of the differences to the first point, over the rationals."""
    if not points:
        raise ValueError("affine_rank needs at least one point")
    base = points[0]
    diffs = [[x - b for x, b in zip(point, base)] for point in points[1:]]
    return matrix_rank(diffs)


def rational_simplex(p: HPolytope, objective: Sequence[Fraction], sense: str = "min"):
    """Exact optimum of a linear objective over the polytope.

    Raises InfeasibleError or UnboundedError; otherwise returns the
    optimal value and a witness point.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    result = solve_linear_program(p.dim, p.rows, [], list(objective), minimize=(sense == "min"))
    if result.status == "infeasible":
        raise InfeasibleError("no feasible point")
    if result.status == "unbounded":
        raise UnboundedError("objective is unbounded over the polytope")
    return result.value, result.point


# ---------------------------------------------------------------------------
# certificates


def pair_relaxation_rows(net: Network, pair: CyclePathPair, big_m: Fraction) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """H-rows of the per-pair relaxation over (angle difference, y).

    Both path rows and the fallback big-M row, absolute values expanded;
    the y box is not included.
    """
    size = len(pair.cycle.lines)
    pos = {line: k + 1 for k, line in enumerate(pair.cycle.lines)}
    rows = []
    for sign in (1, -1):
        for path in (pair.shorter, pair.longer):
            coeffs = [Fraction(0)] * (size + 1)
            coeffs[0] = Fraction(sign)
            rhs = path.total_weight
            for line in path.lines:
                slope = big_m - net.lines[line].weight
                coeffs[pos[line]] = slope
                rhs += slope
            rows.append((tuple(coeffs), rhs))
        coeffs = [Fraction(0)] * (size + 1)
        coeffs[0] = Fraction(sign)
        rows.append((tuple(coeffs), big_m))
    return rows


def _y_box_rows(size: int) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    rows = []
    for k in range(size):
        up = [Fraction(0)] * (size + 1)
        up[k + 1] = Fraction(1)
        rows.append((tuple(up), Fraction(1)))
        down = [Fraction(0)] * (size + 1)
        down[k + 1] = Fraction(-1)
        rows.append((tuple(down), Fraction(0)))
    return rows


def _cpvi_rows(cut: CutCPVI) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    size = len(cut.pair.cycle.lines)
    pos = {line: k + 1 for k, line in enumerate(cut.pair.cycle.lines)}
    rows = []
    for sign in (1, -1):
        coeffs = [Fraction(0)] * (size + 1)
        coeffs[0] = Fraction(sign)
        for line, coeff in cut.y_coeffs:
            coeffs[pos[line]] = -coeff
        rows.append((tuple(coeffs), cut.constant))
    return rows


def candidate_hull(
    net: Network,
    pair: CyclePathPair,
    big_m: Fraction,
    include_fallback: bool = True,
    complete: bool = False,
) -> HPolytope:
    """A hull description to adjudicate over (angle difference, y).

    The base candidate is the y box and both signs of the path-based
    cut; include_fallback adds the |angle| <= M rows.  With complete,
    the two aggregated single-path rows produced by the zero branches of
    the indicator elimination are added as well:

        |angle| <= w(path) + (M - w(path)) * (len(path) - sum of path y)

    for each arc.  The oracle certifies that only this completed
    description closes the hull; the base candidate (with or without
    the fallback) admits vertices outside it.
    """
    from .cuts import build_cpvi

    size = len(pair.cycle.lines)
    pos = {line: k + 1 for k, line in enumerate(pair.cycle.lines)}
    rows = _y_box_rows(size) + _cpvi_rows(build_cpvi(pair, big_m))
    if complete:
        for sign in (1, -1):
            for path in (pair.shorter, pair.longer):
                slope = big_m - path.total_weight
                coeffs = [Fraction(0)] * (size + 1)
                coeffs[0] = Fraction(sign)
                for line in path.lines:
                    coeffs[pos[line]] = slope
                rows.append((tuple(coeffs), path.total_weight + slope * len(path.lines)))
    if include_fallback or complete:
        for sign in (1, -1):
            coeffs = [Fraction(0)] * (size + 1)
            coeffs[0] = Fraction(sign)
            rows.append((tuple(coeffs), big_m))
    return HPolytope(tuple(rows), size + 1)


def extended_polytope(sys: ExtendedSystem) -> HPolytope:
    return HPolytope(tuple(sys.all_rows()), sys.dim)


def cpvi_validity_certificate(net: Network, cut: CutCPVI) -> CertificateReport:
    """Every integer-feasible extreme satisfies the cut."""
    pair = cut.pair
    coeff = cut.coeff_map()
    for dtheta, bits in integer_points(net, pair, cut.big_m):
        rhs = cut.constant
        for line, value in zip(pair.cycle.lines, bits):
            rhs += coeff[line] * value
        if abs(dtheta) > rhs:
            return CertificateReport(
                Claim.VALIDITY,
                False,
                {"integer_point": {"dtheta": format_rational(dtheta), "y": list(bits)}},
            )
    return CertificateReport(Claim.VALIDITY, True)


def full_dimension_certificate(net: Network, pair: CyclePathPair, big_m: Fraction) -> CertificateReport:
    """Strict interior point (0, 1/2, ..., 1/2) plus coordinate
    perturbations of affine rank |C| + 1."""
    size = len(pair.cycle.lines)
    rows = pair_relaxation_rows(net, pair, big_m) + _y_box_rows(size)
    center = tuple([Fraction(0)] + [Fraction(1, 2)] * size)
    slacks = [b - dot(coeffs, center) for coeffs, b in rows]
    if any(s <= 0 for s in slacks):
        k = next(i for i, s in enumerate(slacks) if s <= 0)
        return CertificateReport(
            Claim.FULL_DIMENSION,
            False,
            {"non_interior_row": k, "point": _point_json(center)},
        )
    points = [center]
    for j in range(size + 1):
        step = None
        for (coeffs, _), slack in zip(rows, slacks):
            if coeffs[j] != 0:
                room = slack / abs(coeffs[j])
                if step is None or room < step:
                    step = room
        step = (step / 2) if step is not None else Fraction(1)
        moved = list(center)
        moved[j] += step
        points.append(tuple(moved))
    rank = affine_rank(points)
    if rank != size + 1:
        return CertificateReport(
            Claim.FULL_DIMENSION, False, {"rank": rank, "expected": size + 1}
        )
    return CertificateReport(Claim.FULL_DIMENSION, True)


def facet_certificate(net: Network, cut: CutCPVI) -> CertificateReport:
    """The explicit tight-point family: all in the integer set, all tight,
    affinely independent, over a full-dimensional hull."""
    pair = cut.pair
    big_m = cut.big_m
    size = len(pair.cycle.lines)
    pos = {line: k for k, line in enumerate(pair.cycle.lines)}
    ones = [1] * size

    def make_point(dtheta: Fraction, off: Sequence[int]) -> tuple[Fraction, tuple[int, ...]]:
        bits = list(ones)
        for line in off:
            bits[pos[line]] = 0
        return (dtheta, tuple(bits))

    points = [make_point(pair.shorter.total_weight, [])]
    for line in pair.shorter.lines:
        points.append(make_point(pair.longer.total_weight, [line]))
    first_short = pair.shorter.lines[0]
    for line in pair.longer.lines:
        points.append(make_point(big_m, [first_short, line]))

    member = set()
    for dtheta, bits in integer_points(net, pair, big_m):
        member.add((dtheta, bits))
    coeff = cut.coeff_map()
    for dtheta, bits in points:
        if (dtheta, bits) not in member:
            return CertificateReport(
                Claim.FACET_RANK,
                False,
                {"not_integer_feasible": {"dtheta": format_rational(dtheta), "y": list(bits)}},
            )
        rhs = cut.constant + sum(
            (coeff[line] * value for line, value in zip(pair.cycle.lines, bits)), Fraction(0)
        )
        if abs(dtheta) != rhs:
            return CertificateReport(
                Claim.FACET_RANK,
                False,
                {"not_tight": {"dtheta": format_rational(dtheta), "y": list(bits), "rhs": format_rational(rhs)}},
            )
    flat = [(dtheta, *[Fraction(v) for v in bits]) for dtheta, bits in points]
    rank = affine_rank(flat)
    if rank != size:
        return CertificateReport(Claim.FACET_RANK, False, {"rank": rank, "expected": size})
    full = full_dimension_certificate(net, pair, big_m)
    if not full.passed:
        return CertificateReport(Claim.FACET_RANK, False, {"full_dimension": full.witness})
    return CertificateReport(Claim.FACET_RANK, True)


def local_idealness_certificate(net: Network, sys: ExtendedSystem) -> CertificateReport:
    """Every vertex of the lifted system is binary in all 0/1 variables."""
    poly = extended_polytope(sys)
    binary_coords = range(1, sys.dim)  # everything but the angle difference
    for vertex in enumerate_vertices(poly):
        for j in binary_coords:
            if vertex[j] != 0 and vertex[j] != 1:
                return CertificateReport(
                    Claim.LOCAL_IDEAL,
                    False,
                    {"vertex": _point_json(vertex), "fractional_var": sys.var_names[j]},
                )
    return CertificateReport(Claim.LOCAL_IDEAL, True)


def hull_equality(net: Network, pair: CyclePathPair, big_m: Fraction, candidate: HPolytope) -> CertificateReport:
    """PASS iff the candidate contains every integer extreme and every
    candidate vertex is an integer-feasible point of the relaxation."""
    size = len(pair.cycle.lines)
    if size > HULL_CYCLE_CAP:
        raise CapExceededError(f"cycle size {size} exceeds the hull-equality cap {HULL_CYCLE_CAP}")
    if candidate.dim != size + 1:
        raise ValueError("candidate must live in (angle difference, y) space of the pair")
    for dtheta, bits in integer_points(net, pair, big_m):
        point = (dtheta, *[Fraction(v) for v in bits])
        row = candidate.first_violated(point)
        if row is not None:
            return CertificateReport(
                Claim.HULL_EQUALITY,
                False,
                {"violated_integer_point": {"dtheta": format_rational(dtheta), "y": list(bits)}, "row": row},
            )
    relax = HPolytope(tuple(pair_relaxation_rows(net, pair, big_m)), size + 1)
    for vertex in enumerate_vertices(candidate):
        y_part = vertex[1:]
        if any(v != 0 and v != 1 for v in y_part):
            return CertificateReport(
                Claim.HULL_EQUALITY, False, {"fractional_vertex": _point_json(vertex)}
            )
        if not relax.contains(vertex):
            return CertificateReport(
                Claim.HULL_EQUALITY, False, {"infeasible_vertex": _point_json(vertex)}
            )
    return CertificateReport(Claim.HULL_EQUALITY, True)


def point_in_hull(point: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]) -> bool:
    """Exact membership of a point in the convex hull of finitely many points."""
    if not generators:
        return False
    dim = len(point)
    eqs = []
    for j in range(dim):
        eqs.append(([Fraction(g[j]) for g in generators], Fraction(point[j])))
    eqs.append(([Fraction(1)] * len(generators), Fraction(1)))
    result = solve_linear_program(len(generators), [], eqs, None, nonneg=True)
    return result.status == "optimal"


# ---------------------------------------------------------------------------
# brute-force switching enumeration


@dataclass(frozen=True)
class DcotsResult:
    cost: Fraction
    generation: dict[str, Fraction]
    flows: dict[int, Fraction]
    angles: dict[str, Fraction]
    y: dict[int, int]


def _pattern_lp(net: Network, active: Mapping[int, int], big_m: Fraction,
                cpvis: Sequence[CutCPVI], cvis: Sequence[CutCVI]):
    """Angle-space LP of one topology: flows on active lines substituted
    by angle differences over reactance, exactly.  Cut rows are returned
    separately so callers can append them lazily."""
    ids = [bus.id for bus in net.buses]
    ref = ids[0]
    theta_col = {bus: None for bus in ids}
    cols: list[str] = []
    for bus in ids:
        cols.append(f"g::{bus}")
    for bus in ids[1:]:
        theta_col[bus] = len(cols)
        cols.append(f"t::{bus}")
    n = len(cols)

    def theta_coeff(row: list[Fraction], bus: str, value: Fraction) -> None:
        col = theta_col[bus]
        if col is not None:
            row[col] += value

    ineqs: list[tuple[list[Fraction], Fraction]] = []
    eqs: list[tuple[list[Fraction], Fraction]] = []

    for k, bus in enumerate(ids):
        row = [Fraction(0)] * n
        row[k] = Fraction(1)
        ineqs.append((row, net.buses[k].gen_max))  # g <= gmax
        row = [Fraction(0)] * n
        row[k] = Fraction(-1)
        ineqs.append((row, Fraction(0)))  # g >= 0

    for idx, line in enumerate(net.lines):
        limit = line.weight if active[idx] else big_m
        for sign in (1, -1):
            row = [Fraction(0)] * n
            theta_coeff(row, line.from_bus, Fraction(sign))
            theta_coeff(row, line.to_bus, Fraction(-sign))
            ineqs.append((row, limit))

    for k, bus in enumerate(ids):
        row = [Fraction(0)] * n
        row[k] = Fraction(1)
        for idx in net.adjacency[bus]:
            if not active[idx]:
                continue
            line = net.lines[idx]
            inv = 1 / line.reactance
            # flow from->to equals (theta_from - theta_to)/x; it enters
            # the balance positively at 'to' and negatively at 'from'
            orient = Fraction(1) if line.to_bus == bus else Fraction(-1)
            theta_coeff(row, line.from_bus, orient * inv)
            theta_coeff(row, line.to_bus, -orient * inv)
        eqs.append((row, net.buses[k].demand))

    cut_rows: list[tuple[list[Fraction], Fraction]] = []
    for cut in cpvis:
        m, nn = cut.pair.pair
        rhs = cut.rhs_at({line: Fraction(active[line]) for line, _ in cut.y_coeffs})
        for sign in (1, -1):
            row = [Fraction(0)] * n
            theta_coeff(row, nn, Fraction(sign))
            theta_coeff(row, m, Fraction(-sign))
            cut_rows.append((row, rhs))

    for cut in cvis:
        rhs = cut.rhs_at({line: Fraction(active[line]) for line, _ in cut.y_coeffs})
        base = [Fraction(0)] * n
        for line_idx, sign in cut.flow_signs:
            if not active[line_idx]:
                continue  # the flow is fixed to zero
            line = net.lines[line_idx]
            # f*x on an active line equals the oriented angle drop
            theta_coeff(base, line.from_bus, Fraction(sign))
            theta_coeff(base, line.to_bus, Fraction(-sign))
        cut_rows.append((list(base), rhs))
        cut_rows.append(([-v for v in base], rhs))

    objective = [Fraction(0)] * n
    for k, bus in enumerate(net.buses):
        objective[k] = bus.gen_cost
    return ids, ref, theta_col, ineqs, eqs, objective, cut_rows


def brute_force_dcots(net: Network, cpvis: Sequence[CutCPVI] = (), cvis: Sequence[CutCVI] = ()) -> DcotsResult:
    """Exact optimum over every switching pattern, one LP per topology.

    Appended cut rows never change the reported optimum when the cuts
    are valid; the invariant tests rely on exactly that.
    """
    from .bounds import global_big_m

    switchable = [i for i, line in enumerate(net.lines) if line.switchable]
    if len(switchable) > BRUTE_FORCE_CAP:
        raise CapExceededError(
            f"{len(switchable)} switchable lines exceed the enumeration cap {BRUTE_FORCE_CAP}"
        )
    big_m = global_big_m(net)
    best: DcotsResult | None = None
    for bits in itertools.product((1, 0), repeat=len(switchable)):
        active = {i: 1 for i in range(len(net.lines))}
        for i, bit in zip(switchable, bits):
            active[i] = bit
        ids, ref, theta_col, ineqs, eqs, objective, cut_rows = _pattern_lp(net, active, big_m, cpvis, cvis)
        result = solve_linear_program(len(objective), ineqs, eqs, objective)
        if result.status == "optimal" and cut_rows and not all(
            dot(coeffs, result.point) <= rhs for coeffs, rhs in cut_rows
        ):
            # the base optimizer violates an appended row, so the rows do
            # bind for this pattern; re-solve with them in place
            result = solve_linear_program(len(objective), ineqs + cut_rows, eqs, objective)
        if result.status != "optimal":
            continue
        point = result.point
        angles = {ref: Fraction(0)}
        for bus, col in theta_col.items():
            if col is not None:
                angles[bus] = point[col]
        flows = {}
        for idx, line in enumerate(net.lines):
            if active[idx]:
                flows[idx] = (angles[line.from_bus] - angles[line.to_bus]) / line.reactance
            else:
                flows[idx] = Fraction(0)
        generation = {bus: point[k] for k, bus in enumerate(ids)}
        candidate = DcotsResult(result.value, generation, flows, angles, dict(active))
        if best is None or candidate.cost < best.cost:
            best = candidate
    if best is None:
        raise AllPatternsInfeasibleError("no switching pattern admits a feasible dispatch")
    return best
