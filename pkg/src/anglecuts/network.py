"""Power network model: buses, lines, and the validated graph they form.

The network is loaded once, validated, and then shared read-only; every
other module treats it as immutable.  All electrical parameters are exact
rationals (see the JSON schema in the README: decimal strings or "p/q").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .errors import DisconnectedError, ParseError, ValidationError
from .rational import format_rational, parse_rational

__all__ = [
    "Bus",
    "Line",
    "Network",
    "load_network",
    "line_weight",
    "network_to_json",
    "serialize_network",
]


@dataclass(frozen=True)
class Bus:
    id: str
    demand: Fraction = Fraction(0)
    gen_max: Fraction = Fraction(0)
    gen_cost: Fraction = Fraction(0)


@dataclass(frozen=True)
class Line:
    from_bus: str
    to_bus: str
    reactance: Fraction
    capacity: Fraction
    switchable: bool = True

    @property
    def weight(self) -> Fraction:
        # capacity * reactance, exactly; the tightest angle bound across
        # this line while it is in service
        return self.capacity * self.reactance

    def endpoints(self) -> frozenset[str]:
        return frozenset((self.from_bus, self.to_bus))

    def other(self, bus: str) -> str:
        return self.to_bus if bus == self.from_bus else self.from_bus


@dataclass(frozen=True)
class Network:
    buses: tuple[Bus, ...]
    lines: tuple[Line, ...]

    @cached_property
    def bus_index(self) -> Mapping[str, int]:
        return {bus.id: i for i, bus in enumerate(self.buses)}

    @cached_property
    def adjacency(self) -> Mapping[str, tuple[int, ...]]:
        adj: dict[str, list[int]] = {bus.id: [] for bus in self.buses}
        for idx, line in enumerate(self.lines):
            adj[line.from_bus].append(idx)
            adj[line.to_bus].append(idx)
        return {bus: tuple(idxs) for bus, idxs in adj.items()}

    def bus(self, bus_id: str) -> Bus:
        return self.buses[self.bus_index[bus_id]]

    def with_all_lines_fixed(self) -> "Network":
        """Copy with every line non-switchable (y fixed to 1)."""
        return Network(self.buses, tuple(replace(ln, switchable=False) for ln in self.lines))

    def with_all_lines_switchable(self) -> "Network":
        return Network(self.buses, tuple(replace(ln, switchable=True) for ln in self.lines))


def line_weight(line: Line) -> Fraction:
    """Exact product capacity * reactance."""
    return line.weight


def _validate(buses: tuple[Bus, ...], lines: tuple[Line, ...]) -> None:
    seen: set[str] = set()
    for bus in buses:
        if bus.id in seen:
            raise ValidationError(f"duplicate bus id {bus.id!r}")
        seen.add(bus.id)
        if bus.demand < 0:
            raise ValidationError(f"bus {bus.id!r}: demand must be >= 0")
        if bus.gen_max < 0:
            raise ValidationError(f"bus {bus.id!r}: gen_max must be >= 0")
        if bus.gen_cost < 0:
            raise ValidationError(f"bus {bus.id!r}: gen_cost must be >= 0")
    for k, line in enumerate(lines):
        label = f"line {k} ({line.from_bus!r}-{line.to_bus!r})"
        if line.from_bus not in seen:
            raise ValidationError(f"{label}: unknown bus {line.from_bus!r}")
        if line.to_bus not in seen:
            raise ValidationError(f"{label}: unknown bus {line.to_bus!r}")
        if line.from_bus == line.to_bus:
            raise ValidationError(f"{label}: self-loop")
        if line.reactance <= 0:
            raise ValidationError(f"{label}: reactance must be > 0")
        if line.capacity <= 0:
            raise ValidationError(f"{label}: capacity must be > 0")
    # connectivity over the full graph, switchable lines included
    if buses:
        adj: dict[str, list[str]] = {bus.id: [] for bus in buses}
        for line in lines:
            adj[line.from_bus].append(line.to_bus)
            adj[line.to_bus].append(line.from_bus)
        reached = {buses[0].id}
        stack = [buses[0].id]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in reached:
                    reached.add(nxt)
                    stack.append(nxt)
        for bus in buses:
            if bus.id not in reached:
                raise DisconnectedError(f"bus {bus.id!r} is not connected to bus {buses[0].id!r}")


def _read_source(source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    raise ParseError(f"unsupported network source of type {type(source).__name__}")


def load_network(source) -> Network:
    """Parse and validate a network document (bytes, str, or readable stream).

    Raises ParseError for malformed documents and ValidationError (naming
    the offending element) for semantic violations, including a
    disconnected graph.
    """
    text = _read_source(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be an object")

    raw_buses = doc.get("buses")
    raw_lines = doc.get("lines", [])
    if not isinstance(raw_buses, list) or not isinstance(raw_lines, list):
        raise ParseError("'buses' must be a list and 'lines', when present, a list")

    buses = []
    for i, obj in enumerate(raw_buses):
        if not isinstance(obj, dict) or "id" not in obj or not isinstance(obj["id"], str):
            raise ParseError(f"bus #{i}: expected an object with a string 'id'")
        try:
            buses.append(
                Bus(
                    id=obj["id"],
                    demand=parse_rational(obj.get("demand", 0), f"bus {obj['id']!r} demand"),
                    gen_max=parse_rational(obj.get("gen_max", 0), f"bus {obj['id']!r} gen_max"),
                    gen_cost=parse_rational(obj.get("gen_cost", 0), f"bus {obj['id']!r} gen_cost"),
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    lines = []
    for k, obj in enumerate(raw_lines):
        if not isinstance(obj, dict):
            raise ParseError(f"line #{k}: expected an object")
        for key in ("from", "to"):
            if key not in obj or not isinstance(obj[key], str):
                raise ParseError(f"line #{k}: missing string field {key!r}")
        switchable = obj.get("switchable", True)
        if not isinstance(switchable, bool):
            raise ParseError(f"line #{k}: 'switchable' must be a boolean")
        try:
            lines.append(
                Line(
                    from_bus=obj["from"],
                    to_bus=obj["to"],
                    reactance=parse_rational(obj.get("reactance"), f"line #{k} reactance"),
                    capacity=parse_rational(obj.get("capacity"), f"line #{k} capacity"),
                    switchable=switchable,
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    buses_t = tuple(buses)
    lines_t = tuple(lines)
    _validate(buses_t, lines_t)
    return Network(buses_t, lines_t)


def network_to_json(net: Network) -> dict:
    return {
        "buses": [
            {
                "id": bus.id,
                "demand": format_rational(bus.demand),
                "gen_max": format_rational(bus.gen_max),
                "gen_cost": format_rational(bus.gen_cost),
            }
            for bus in net.buses
        ],
        "lines": [
            {
                "from": line.from_bus,
                "to": line.to_bus,
                "reactance": format_rational(line.reactance),
                "capacity": format_rational(line.capacity),
                "switchable": line.switchable,
            }
            for line in net.lines
        ],
    }


def serialize_network(net: Network) -> str:
    return json.dumps(network_to_json(net), indent=2) + "\n"


def parallel_ordinals(net: Network) -> list[int]:
    """Per line, its ordinal among lines sharing the same endpoints.

    Used to give parallel circuits distinct names in exported models.
    """
    counts: dict[frozenset[str], int] = {}
    ordinals = []
    for line in net.lines:
        key = line.endpoints()
        ordinals.append(counts.get(key, 0))
        counts[key] = counts.get(key, 0) + 1
    return ordinals
