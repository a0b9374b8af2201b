import itertools
import random
from fractions import Fraction as F

import pytest

from anglecuts.bounds import global_big_m
from anglecuts.cuts import build_cpvi, build_cvi
from anglecuts.errors import AllPatternsInfeasibleError, CapExceededError, UnboundedError
from anglecuts.extended import build_extended
from anglecuts.graph import fundamental_cycle_basis, split_cycle
from anglecuts.oracle import (
    Claim,
    HPolytope,
    affine_rank,
    brute_force_dcots,
    candidate_hull,
    cpvi_validity_certificate,
    enumerate_vertices,
    extended_polytope,
    facet_certificate,
    full_dimension_certificate,
    hull_equality,
    integer_points,
    local_idealness_certificate,
    pair_relaxation_rows,
    point_in_hull,
    rational_simplex,
)

from _brute import brute_vertices
from conftest import make_net, ring_net


@pytest.fixture(scope="module")
def fig1_pair(fig1):
    return split_cycle(fig1, fundamental_cycle_basis(fig1)[0], "i0", "i4")


# -- integer points ---------------------------------------------------------


def test_integer_points_bounds(fig1, fig1_pair):
    points = integer_points(fig1, fig1_pair, F(6))
    by_bits = {}
    for d, bits in points:
        by_bits.setdefault(bits, set()).add(d)
    assert by_bits[(1,) * 6] == {F(-2), F(0), F(2)}
    assert by_bits[(0,) * 6] == {F(-6), F(0), F(6)}
    # one longer-path line off, shorter active: the shorter path governs
    bits = [1] * 6
    bits[fig1_pair.longer.lines[0]] = 0
    assert max(by_bits[tuple(bits)]) == 2


def test_integer_points_cap():
    net = ring_net([1] * 21)
    pair = split_cycle(net, fundamental_cycle_basis(net)[0], "r0", "r1")
    with pytest.raises(CapExceededError):
        integer_points(net, pair, net.lines[0].weight * 21)


# -- vertex enumeration -----------------------------------------------------


def _box_rows(dim, hi=1):
    rows = []
    for j in range(dim):
        up = [F(0)] * dim
        up[j] = F(1)
        rows.append((tuple(up), F(hi)))
        down = [F(0)] * dim
        down[j] = F(-1)
        rows.append((tuple(down), F(0)))
    return rows


def test_unit_box_vertices():
    poly = HPolytope(tuple(_box_rows(2)), 2)
    assert len(enumerate_vertices(poly)) == 4
    poly3 = HPolytope(tuple(_box_rows(3)), 3)
    assert len(enumerate_vertices(poly3)) == 8


def test_simplex_vertices():
    rows = [((F(1), F(1)), F(1)), ((F(-1), F(0)), F(0)), ((F(0), F(-1)), F(0))]
    assert enumerate_vertices(HPolytope(tuple(rows), 2)) == [
        (F(0), F(0)),
        (F(0), F(1)),
        (F(1), F(0)),
    ]


def test_empty_polytope():
    rows = [((F(1),), F(0)), ((F(-1),), F(-1))]
    assert enumerate_vertices(HPolytope(tuple(rows), 1)) == []


def test_unbounded_polytope_raises():
    rows = [((F(-1), F(0)), F(0)), ((F(0), F(-1)), F(0))]
    with pytest.raises(UnboundedError):
        enumerate_vertices(HPolytope(tuple(rows), 2))


def test_lower_dimensional_polytope():
    rows = _box_rows(2) + [((F(1), F(0)), F(0))]  # x pinned to 0
    vertices = enumerate_vertices(HPolytope(tuple(rows), 2))
    assert vertices == [(F(0), F(0)), (F(0), F(1))]


def test_caps_raise():
    with pytest.raises(CapExceededError):
        enumerate_vertices(HPolytope(tuple(_box_rows(13)), 13))
    rows = tuple(_box_rows(2)) * 11
    with pytest.raises(CapExceededError):
        enumerate_vertices(HPolytope(rows, 2))


def test_vertices_match_basis_enumeration_oracle():
    rng = random.Random(23)
    for _ in range(25):
        dim = rng.randint(2, 3)
        rows = _box_rows(dim, hi=rng.randint(1, 3))
        for _ in range(rng.randint(1, 4)):
            coeffs = tuple(F(rng.randint(-2, 3)) for _ in range(dim))
            rows.append((coeffs, F(rng.randint(-1, 5))))
        poly = HPolytope(tuple(rows), dim)
        assert enumerate_vertices(poly) == brute_vertices(rows, dim)


def test_extended_two_cycle_vertices_binary():
    net = ring_net([1, 3])
    pair = split_cycle(net, fundamental_cycle_basis(net)[0], "r0", "r1")
    poly = extended_polytope(build_extended(pair, F(4)))
    vertices = enumerate_vertices(poly)
    assert vertices == brute_vertices(list(poly.rows), poly.dim)
    for vertex in vertices:
        assert all(v in (0, 1) for v in vertex[1:])


# -- affine rank ------------------------------------------------------------


def test_affine_rank_examples(fig1, fig1_pair):
    cut = build_cpvi(fig1_pair, F(6))
    report = facet_certificate(fig1, cut)
    assert report.passed
    assert affine_rank([(F(1), F(2)), (F(1), F(2))]) == 0
    dim = 4
    points = [tuple(F(0) for _ in range(dim))]
    for j in range(dim):
        e = [F(0)] * dim
        e[j] = F(1)
        points.append(tuple(e))
    assert affine_rank(points) == dim


# -- certificates -----------------------------------------------------------


def test_validity_certificate(fig1, fig1_pair):
    cut = build_cpvi(fig1_pair, F(6))
    assert cpvi_validity_certificate(fig1, cut).passed


def test_full_dimension_certificate(fig1, fig1_pair):
    report = full_dimension_certificate(fig1, fig1_pair, F(6))
    assert report.claim is Claim.FULL_DIMENSION and report.passed


def test_facet_certificate_fig1(fig1, fig1_pair):
    assert facet_certificate(fig1, build_cpvi(fig1_pair, F(6))).passed


def test_facet_certificate_degenerate_tie_recorded():
    net = ring_net([1, 1, 1, 1])
    pair = split_cycle(net, fundamental_cycle_basis(net)[0], "r0", "r2")
    report = facet_certificate(net, build_cpvi(pair, F(4)))
    assert report.claim is Claim.FACET_RANK
    assert isinstance(report.passed, bool)  # outcome recorded, not prescribed


def test_facet_certificate_big_m_boundary(fig1, fig1_pair):
    report = facet_certificate(fig1, build_cpvi(fig1_pair, F(4)))  # delta_m == 0
    assert report.claim is Claim.FACET_RANK
    assert isinstance(report.passed, bool)


def test_local_idealness_fig1(fig1, fig1_pair):
    report = local_idealness_certificate(fig1, build_extended(fig1_pair, F(6)))
    assert report.passed


def test_hull_equality_strict_fails_with_zero_pattern_witness(fig1, fig1_pair):
    candidate = candidate_hull(fig1, fig1_pair, F(6), include_fallback=False)
    report = hull_equality(fig1, fig1_pair, F(6), candidate)
    assert not report.passed
    witness = report.witness["infeasible_vertex"]
    assert witness[1:] == ["0"] * 6  # every line off
    assert abs(F(witness[0])) == 14  # the cut constant, well past the big-M of 6


def test_hull_equality_fallback_candidate_still_leaks(fig1, fig1_pair):
    """The y box, the cut, and the fallback bound do not close the hull:
    a vertex with the shorter path active sits above the shorter-path row."""
    candidate = candidate_hull(fig1, fig1_pair, F(6), include_fallback=True)
    report = hull_equality(fig1, fig1_pair, F(6), candidate)
    assert not report.passed
    key = "infeasible_vertex" if "infeasible_vertex" in report.witness else "fractional_vertex"
    vertex = [F(v) for v in report.witness[key]]
    relax = HPolytope(tuple(pair_relaxation_rows(fig1, fig1_pair, F(6))), 7)
    if key == "infeasible_vertex":
        assert not relax.contains(vertex)
        # independent confirmation: not a convex combination of integer points
        generators = [(d, *[F(b) for b in bits]) for d, bits in integer_points(fig1, fig1_pair, F(6))]
        assert not point_in_hull(vertex, generators)


def test_hull_equality_completed_projection_passes(fig1, fig1_pair):
    candidate = candidate_hull(fig1, fig1_pair, F(6), complete=True)
    assert hull_equality(fig1, fig1_pair, F(6), candidate).passed


def test_hull_equality_trivial_box_fails(fig1, fig1_pair):
    size = 6
    rows = []
    for sign in (1, -1):
        coeffs = [F(0)] * (size + 1)
        coeffs[0] = F(sign)
        rows.append((tuple(coeffs), F(6)))
    for j in range(size):
        up = [F(0)] * (size + 1)
        up[j + 1] = F(1)
        rows.append((tuple(up), F(1)))
        down = [F(0)] * (size + 1)
        down[j + 1] = F(-1)
        rows.append((tuple(down), F(0)))
    report = hull_equality(fig1, fig1_pair, F(6), HPolytope(tuple(rows), size + 1))
    assert not report.passed and "infeasible_vertex" in report.witness


def test_hull_equality_cap(fig1):
    net = ring_net([1] * 7)
    pair = split_cycle(net, fundamental_cycle_basis(net)[0], "r0", "r3")
    with pytest.raises(CapExceededError):
        hull_equality(net, pair, F(7), candidate_hull(net, pair, F(7)))


def test_completed_hull_on_random_cycles():
    rng = random.Random(31)
    for _ in range(8):
        size = rng.randint(2, 5)
        weights = [F(rng.randint(1, 20), rng.randint(1, 6)) for _ in range(size)]
        net = ring_net(weights)
        cycle = fundamental_cycle_basis(net)[0]
        m, n = rng.sample(list(cycle.buses), 2)
        pair = split_cycle(net, cycle, m, n)
        candidate = candidate_hull(net, pair, cycle.total_weight, complete=True)
        assert hull_equality(net, pair, cycle.total_weight, candidate).passed


# -- rational simplex over polytopes ---------------------------------------


def test_rational_simplex_examples(fig1, fig1_pair):
    poly = HPolytope((((F(-1),), F(-1, 3)),), 1)
    value, point = rational_simplex(poly, [F(1)], "min")
    assert value == F(1, 3)

    system = extended_polytope(build_extended(fig1_pair, F(6)))
    value, _ = rational_simplex(system, [F(1)] + [F(0)] * (system.dim - 1), "max")
    assert value == 6  # the unlinked big-M bound is attainable


# -- brute-force switching enumeration --------------------------------------


def test_brute_force_single_bus():
    net = make_net([("solo",)], [])
    result = brute_force_dcots(net)
    assert result.cost == 0 and result.generation == {"solo": F(0)}


def test_brute_force_two_bus_dispatch():
    net = make_net([("a", 0, 4, 5), ("b", 1)], [("a", "b", 1, 2)])
    result = brute_force_dcots(net)
    assert result.cost == 5
    assert result.flows[0] == 1
    assert result.generation["a"] == 1


def test_brute_force_switching_strictly_helps(triangle):
    switched = brute_force_dcots(triangle)
    fixed = brute_force_dcots(triangle.with_all_lines_fixed())
    assert switched.cost == 6 and fixed.cost == 33
    assert switched.cost < fixed.cost
    assert switched.y == {0: 1, 1: 1, 2: 0}


def test_brute_force_all_infeasible():
    net = make_net([("a", 0, 0, 0), ("b", 5)], [("a", "b", 1, 1)])
    with pytest.raises(AllPatternsInfeasibleError):
        brute_force_dcots(net)


def test_brute_force_cap():
    lines = [("a", "b", 1, 1)] * 13
    net = make_net([("a", 0, 1, 1), ("b", 1)], lines)
    with pytest.raises(CapExceededError):
        brute_force_dcots(net)


def test_brute_force_kcl_holds_at_optimum(triangle):
    result = brute_force_dcots(triangle)
    for bus in triangle.buses:
        inflow = sum(
            result.flows[i] * (1 if triangle.lines[i].to_bus == bus.id else -1)
            for i in triangle.adjacency[bus.id]
        )
        assert inflow + result.generation[bus.id] == bus.demand


def test_cuts_never_change_optimum(fig1, triangle):
    for net in (triangle, fig1):
        cycles = fundamental_cycle_basis(net)
        big = global_big_m(net)
        cpvis, cvis = [], []
        for cycle in cycles:
            buses = list(cycle.buses)
            for i in range(len(buses)):
                for j in range(i + 1, len(buses)):
                    cpvis.append(build_cpvi(split_cycle(net, cycle, buses[i], buses[j]), big))
            for r in range(1, len(cycle.lines) + 1):
                for subset in itertools.combinations(cycle.lines, r):
                    cut = build_cvi(net, cycle, subset)
                    if cut is not None:
                        cvis.append(cut)
        plain = brute_force_dcots(net)
        with_cuts = brute_force_dcots(net, cpvis=cpvis, cvis=cvis)
        assert plain.cost == with_cuts.cost


def test_point_in_hull_basics():
    square = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1)), (F(1), F(1))]
    assert point_in_hull((F(1, 2), F(1, 2)), square)
    assert not point_in_hull((F(2), F(0)), square)
