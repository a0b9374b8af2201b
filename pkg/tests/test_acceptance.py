"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Criterion 4 asserts that the y box, the path-based cut, and the fallback
bound together describe the convex hull, and it is expected to fail: the
oracle refutes the claim with explicit witness vertices (confirmed by an
independent convex-combination check) on the worked six-cycle example
and on every random instance.  Adding the two aggregated single-path
rows produced by the zero branches of the indicator elimination closes
the hull on all tested instances; that completed description is also
asserted here.  Every other criterion passes at its stated tolerance.
"""

import itertools
import random
import time
from fractions import Fraction as F

from anglecuts.bounds import global_big_m
from anglecuts.cli import main
from anglecuts.cuts import FractionalPoint, build_cpvi, build_cvi, separate_cpvi
from anglecuts.extended import build_extended
from anglecuts.graph import fundamental_cycle_basis, split_cycle
from anglecuts.oracle import (
    brute_force_dcots,
    candidate_hull,
    cpvi_validity_certificate,
    enumerate_vertices,
    extended_polytope,
    facet_certificate,
    hull_equality,
)
from anglecuts.simplex import solve_linear_program

from _brute import exhaustive_cpvi
from conftest import DATA, make_net, record_acceptance, ring_net

FIG1 = str(DATA / "fig1.json")


def _random_weights(rng, size):
    return [F(rng.randint(1, 30), rng.randint(1, 8)) for _ in range(size)]


def _random_ring_pair(rng, size):
    net = ring_net(_random_weights(rng, size))
    cycle = fundamental_cycle_basis(net)[0]
    m, n = rng.sample(list(cycle.buses), 2)
    return net, cycle, split_cycle(net, cycle, m, n)


def test_criterion_1_worked_example_reproduction(fig1):
    started = time.perf_counter()
    cycle = fundamental_cycle_basis(fig1)[0]
    pair = split_cycle(fig1, cycle, "i0", "i4")
    cut = build_cpvi(pair, global_big_m(fig1))
    ok = (
        pair.shorter.total_weight == 2
        and pair.longer.total_weight == 4
        and global_big_m(fig1) == 6
        and cut.constant == 14
        and all(coeff == -2 for _, coeff in cut.y_coeffs)
        and len(cut.y_coeffs) == 6
    )
    elapsed = time.perf_counter() - started
    record_acceptance("criterion 1: worked-example reproduction", ok and elapsed < 1, f"{elapsed:.3f}s")
    assert ok
    assert elapsed < 1


def test_criterion_2_facet_certificates():
    started = time.perf_counter()
    rng = random.Random(202)
    failures = []
    fig1 = ring_net([1] * 6)
    pair = split_cycle(fig1, fundamental_cycle_basis(fig1)[0], "r0", "r4")
    if not facet_certificate(fig1, build_cpvi(pair, F(6))).passed:
        failures.append("fig1")
    for trial in range(200):
        size = rng.randint(3, 8)
        net, cycle, pair = _random_ring_pair(rng, size)
        report = facet_certificate(net, build_cpvi(pair, cycle.total_weight))
        if not report.passed:
            failures.append((trial, size, report.witness))
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < 60
    record_acceptance("criterion 2: facet certificates (201 instances)", ok, f"{elapsed:.1f}s")
    assert not failures
    assert elapsed < 60


# shared instances for criteria 3 and 4
_C3_INSTANCES = None


def _criterion3_instances():
    global _C3_INSTANCES
    if _C3_INSTANCES is None:
        rng = random.Random(303)
        _C3_INSTANCES = [_random_ring_pair(rng, rng.randint(2, 5)) for _ in range(50)]
    return _C3_INSTANCES


def test_criterion_3_lifted_vertices_binary():
    started = time.perf_counter()
    bad = []
    for trial, (net, cycle, pair) in enumerate(_criterion3_instances()):
        system = build_extended(pair, cycle.total_weight)
        for vertex in enumerate_vertices(extended_polytope(system)):
            if any(value not in (0, 1) for value in vertex[1:]):
                bad.append((trial, vertex))
                break
    elapsed = time.perf_counter() - started
    ok = not bad and elapsed < 120
    record_acceptance("criterion 3: lifted vertices binary (50 pairs)", ok, f"{elapsed:.1f}s")
    assert not bad
    assert elapsed < 120


def test_criterion_4_hull_description_adjudication(fig1):
    started = time.perf_counter()
    # strict candidate on the worked example: must fail with an all-off witness
    cycle = fundamental_cycle_basis(fig1)[0]
    fig_pair = split_cycle(fig1, cycle, "i0", "i4")
    strict = hull_equality(fig1, fig_pair, F(6), candidate_hull(fig1, fig_pair, F(6), include_fallback=False))
    strict_ok = (
        not strict.passed
        and strict.witness is not None
        and "infeasible_vertex" in strict.witness
        and strict.witness["infeasible_vertex"][1:] == ["0"] * 6
        and abs(F(strict.witness["infeasible_vertex"][0])) == 14 > 6
    )

    fallback_failures = []
    strict_recorded = []
    completed_failures = []
    for trial, (net, cycle, pair) in enumerate(_criterion3_instances()):
        big_m = cycle.total_weight
        with_fallback = hull_equality(net, pair, big_m, candidate_hull(net, pair, big_m, include_fallback=True))
        if not with_fallback.passed:
            fallback_failures.append(trial)
        strict_report = hull_equality(net, pair, big_m, candidate_hull(net, pair, big_m, include_fallback=False))
        strict_recorded.append((trial, strict_report.passed))
        completed = hull_equality(net, pair, big_m, candidate_hull(net, pair, big_m, complete=True))
        if not completed.passed:
            completed_failures.append(trial)
    elapsed = time.perf_counter() - started

    strict_pass_count = sum(1 for _, passed in strict_recorded if passed)
    detail = (
        f"fallback candidate failed on {len(fallback_failures)}/50; "
        f"strict passed on {strict_pass_count}/50 (recorded); "
        f"completed projection failed on {len(completed_failures)}/50; {elapsed:.1f}s"
    )
    ok = strict_ok and not fallback_failures
    record_acceptance("criterion 4: hull description adjudication", ok, detail)

    assert strict_ok, "strict candidate must fail on the worked example with an all-off witness"
    assert not completed_failures, "the completed projection is expected to close the hull"
    # The criterion as stated: the candidate {y box, +-cut, |angle| <= M}
    # describes the hull on every instance.  The oracle refutes this with
    # explicit witness vertices (see the module docstring); the assertion
    # is kept faithful to the stated criterion.
    assert not fallback_failures, (
        "hull equality with the fallback candidate failed on "
        f"{len(fallback_failures)} of 50 instances; the stated description "
        "misses the aggregated single-path rows and admits points outside "
        "the hull (first witness instance "
        f"{fallback_failures[0] if fallback_failures else None})"
    )


def test_criterion_5_cut_validity():
    started = time.perf_counter()
    rng = random.Random(505)
    bad = []
    # path-based cuts: zero violated integer points across all patterns
    for trial in range(200):
        size = rng.randint(3, 8)
        net, cycle, pair = _random_ring_pair(rng, size)
        report = cpvi_validity_certificate(net, build_cpvi(pair, cycle.total_weight))
        if not report.passed:
            bad.append(("cpvi", trial, report.witness))

    # flow-space cuts: exact LP maximization over every pattern
    def cvi_max_violation(net, cycle, cut):
        big_m = global_big_m(net)
        size = len(cycle.lines)
        pos = {line: k for k, line in enumerate(cycle.lines)}
        bus_pos = {bus: size + k for k, bus in enumerate(cycle.buses)}
        n_vars = size + len(cycle.buses)
        worst = None
        for bits in itertools.product((0, 1), repeat=size):
            rows = []
            for k, line_idx in enumerate(cycle.lines):
                line = net.lines[line_idx]
                slack = big_m * (1 - bits[k])
                for sign in (1, -1):
                    row = [F(0)] * n_vars
                    row[pos[line_idx]] = sign * line.reactance
                    row[bus_pos[line.from_bus]] -= sign
                    row[bus_pos[line.to_bus]] += sign
                    rows.append((row, slack))
                cap = line.capacity * bits[k]
                for sign in (1, -1):
                    row = [F(0)] * n_vars
                    row[pos[line_idx]] = F(sign)
                    rows.append((row, cap))
            objective = [F(0)] * n_vars
            for line_idx, sign in cut.flow_signs:
                objective[pos[line_idx]] = sign * net.lines[line_idx].reactance
            result = solve_linear_program(n_vars, rows, [], objective, minimize=False)
            assert result.status == "optimal"
            rhs = cut.rhs_at({line: F(b) for line, b in zip(cycle.lines, bits)})
            gap = result.value - rhs  # by symmetry the maximum of |.| is the maximum
            if worst is None or gap > worst:
                worst = gap
        return worst

    cvi_nets = [ring_net([1] * 6)] + [ring_net(_random_weights(rng, rng.randint(3, 6))) for _ in range(3)]
    for net in cvi_nets:
        cycle = fundamental_cycle_basis(net)[0]
        subsets = [tuple(cycle.lines)]
        pair = split_cycle(net, cycle, *rng.sample(list(cycle.buses), 2))
        subsets.append(pair.longer.lines)
        loose = [line for line in cycle.lines if rng.random() < 0.6]
        if loose:
            subsets.append(tuple(loose))
        for subset in subsets:
            cut = build_cvi(net, cycle, subset)
            if cut is None:
                continue
            worst = cvi_max_violation(net, cycle, cut)
            if worst > 0:
                bad.append(("cvi", subset, worst))
    elapsed = time.perf_counter() - started
    ok = not bad
    record_acceptance("criterion 5: cut validity (exact)", ok, f"{elapsed:.1f}s")
    assert not bad


def test_criterion_6_separation_equivalence(fig1, triangle):
    started = time.perf_counter()
    rng = random.Random(606)
    mesh = make_net(
        [("a",), ("b",), ("c",), ("d",)],
        [("a", "b", 1, 1), ("b", "c", 1, 2), ("a", "c", 1, F(3, 2)), ("c", "d", 1, 1), ("b", "d", 1, F(1, 2))],
    )
    nets = [fig1, triangle, mesh, ring_net(_random_weights(rng, 4)), ring_net(_random_weights(rng, 5))]
    mismatches = 0
    for net in nets:
        cycles = fundamental_cycle_basis(net)
        big = global_big_m(net)
        for _ in range(100):
            theta = {
                bus.id: F(rng.randint(-2 * big.numerator, 2 * big.numerator), rng.randint(1, big.denominator + 3))
                for bus in net.buses
            }
            y = {}
            for idx in range(len(net.lines)):
                y[idx] = F(rng.randint(0, 6), 6) if rng.random() < 0.5 else F(rng.choice((0, 1)))
            pt = FractionalPoint(theta, y)
            got = {
                (cut.pair.cycle.lines, frozenset(cut.pair.pair)): (cut.constant, cut.y_coeffs, v)
                for cut, v in separate_cpvi(net, cycles, pt)
            }
            want = {
                key: (cut.constant, cut.y_coeffs, v)
                for key, (cut, v) in exhaustive_cpvi(net, cycles, pt, F(0)).items()
            }
            if got != want:
                mismatches += 1
    elapsed = time.perf_counter() - started
    ok = mismatches == 0
    record_acceptance("criterion 6: separation equals exhaustive enumeration", ok, f"{elapsed:.1f}s")
    assert mismatches == 0


def _random_network(rng):
    n_buses = rng.randint(2, 5)
    buses = []
    total_demand = F(0)
    for k in range(n_buses):
        demand = F(rng.randint(0, 3))
        total_demand += demand
        buses.append((f"b{k}", demand, 0, 0))
    # enough cheap-and-dear generation to keep most instances feasible
    gen_buses = rng.sample(range(n_buses), min(n_buses, 2))
    buses = [list(b) for b in buses]
    for rank, k in enumerate(gen_buses):
        buses[k][2] = total_demand + rng.randint(1, 3)
        buses[k][3] = rng.randint(1, 6) * (rank + 1)
    lines = []
    for k in range(1, n_buses):
        other = rng.randrange(k)
        lines.append((f"b{k}", f"b{other}", F(rng.randint(1, 4), rng.randint(1, 3)), F(rng.randint(1, 6)), rng.random() < 0.7))
    while len(lines) < min(7, n_buses - 1 + rng.randint(0, 3)):
        a, b = rng.sample(range(n_buses), 2)
        lines.append((f"b{a}", f"b{b}", F(rng.randint(1, 4), rng.randint(1, 3)), F(rng.randint(1, 6)), rng.random() < 0.7))
    return make_net([tuple(b) for b in buses], lines)


def test_criterion_7_optimum_preservation():
    started = time.perf_counter()
    rng = random.Random(707)
    checked = 0
    mismatches = []
    while checked < 20:
        net = _random_network(rng)
        try:
            plain = brute_force_dcots(net)
        except Exception:
            continue  # infeasible draw; take another
        cycles = fundamental_cycle_basis(net)
        big = global_big_m(net)
        cpvis, cvis = [], []
        for cycle in cycles:
            for m, n in itertools.combinations(cycle.buses, 2):
                cpvis.append(build_cpvi(split_cycle(net, cycle, m, n), big))
            for r in range(1, len(cycle.lines) + 1):
                for subset in itertools.combinations(cycle.lines, r):
                    cut = build_cvi(net, cycle, subset)
                    if cut is not None:
                        cvis.append(cut)
        with_cuts = brute_force_dcots(net, cpvis=cpvis, cvis=cvis)
        if with_cuts.cost != plain.cost:
            mismatches.append((checked, plain.cost, with_cuts.cost))
        checked += 1
    elapsed = time.perf_counter() - started
    ok = not mismatches and elapsed < 300
    record_acceptance("criterion 7: optimum preserved under cuts (20 networks)", ok, f"{elapsed:.1f}s")
    assert not mismatches
    assert elapsed < 300


def test_criterion_8_determinism(tmp_path, capsys):
    started = time.perf_counter()
    theta = {f"i{k}": "0" for k in range(6)}
    theta["i4"] = "3"
    point_path = tmp_path / "point.json"
    point_path.write_text(
        '{"theta": ' + str(theta).replace("'", '"') + ', "y": {'
        + ", ".join(f'"{k}": "1"' for k in range(6))
        + "}}"
    )
    emits, bounds, cuts = [], [], []
    for run in range(3):
        target = tmp_path / f"out{run}.lp"
        assert main(["emit", FIG1, "--out", str(target)]) == 0
        emits.append(target.read_bytes())
        assert main(["bounds", FIG1, "--out", str(tmp_path / f"b{run}.json")]) == 0
        bounds.append((tmp_path / f"b{run}.json").read_bytes())
        assert main(["cuts", FIG1, "--point", str(point_path), "--out", str(tmp_path / f"c{run}.jsonl")]) == 0
        cuts.append((tmp_path / f"c{run}.jsonl").read_bytes())
    capsys.readouterr()
    golden = (DATA / "fig1_global.lp").read_bytes()
    ok = (
        emits[0] == emits[1] == emits[2] == golden
        and bounds[0] == bounds[1] == bounds[2]
        and cuts[0] == cuts[1] == cuts[2]
    )
    elapsed = time.perf_counter() - started
    record_acceptance("criterion 8: byte-identical outputs across runs", ok, f"{elapsed:.1f}s")
    assert ok
