"""Big-M values and angle-difference bounds for bus pairs.

Two sources: the telescoped shortest-path bound over always-active
(non-switchable) lines, and the trivial network-wide fallback M equal to
the sum of all line weights.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .graph import shortest_path_bound
from .network import Network
from .rational import format_rational

__all__ = ["BoundSource", "PairBound", "BoundReport", "global_big_m", "pair_bound", "bound_report"]


class BoundSource(enum.Enum):
    SHORTEST_PATH_ACTIVE = "shortest_path_active"
    TRIVIAL_M = "trivial_m"


@dataclass(frozen=True)
class PairBound:
    m: str
    n: str
    bound: Fraction
    source: BoundSource


@dataclass(frozen=True)
class BoundReport:
    global_m: Fraction
    pairs: tuple[PairBound, ...]

    def to_json(self) -> dict:
        return {
            "global_M": format_rational(self.global_m),
            "pairs": [
                {
                    "m": pb.m,
                    "n": pb.n,
                    "bound": format_rational(pb.bound),
                    "source": pb.source.value,
                }
                for pb in self.pairs
            ],
        }


def global_big_m(net: Network) -> Fraction:
    """Sum of all line weights: valid for any pair under any topology."""
    return sum((line.weight for line in net.lines), Fraction(0))


def pair_bound(net: Network, m: str, n: str) -> tuple[Fraction, BoundSource]:
    """Tightest bound on the angle difference of a pair valid for every topology.

    Uses the shortest path over non-switchable lines when one exists;
    such a path is active under every switching decision, so the
    telescoped bound always applies.  Otherwise falls back to the global M.
    """
    fixed = [i for i, line in enumerate(net.lines) if not line.switchable]
    sp = shortest_path_bound(net, m, n, active_lines=fixed)
    if sp is not None:
        return sp, BoundSource.SHORTEST_PATH_ACTIVE
    return global_big_m(net), BoundSource.TRIVIAL_M


def bound_report(net: Network) -> BoundReport:
    """Bounds for every unordered bus pair, in network bus order."""
    pairs = []
    ids = [bus.id for bus in net.buses]
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            bound, source = pair_bound(net, ids[i], ids[j])
            pairs.append(PairBound(ids[i], ids[j], bound, source))
    return BoundReport(global_big_m(net), tuple(pairs))
