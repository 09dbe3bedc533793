"""JSON file formats: coloring files and witness reports."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from .core import Coloring, KneserInstance, KSubset, WitnessPair, rank_subset, unrank_subset
from .errors import InputError

_KEY = re.compile(r"[1-9][0-9]*(,[1-9][0-9]*)*")


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise InputError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _load(text: str) -> dict:
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object")
    return data


def _int_field(data: dict, name: str) -> int:
    value = data.get(name)
    if not isinstance(value, int) or isinstance(value, bool):
        raise InputError(f"field {name!r} must be an integer, got {value!r}")
    return value


def parse_coloring_file(text: str) -> Coloring:
    """Validate ``{"n": .., "k": .., "assignments": {"1,2": 0, ...}}`` into a Coloring."""
    data = _load(text)
    n, k = _int_field(data, "n"), _int_field(data, "k")
    instance = KneserInstance(n, k)
    assignments = data.get("assignments")
    if not isinstance(assignments, dict):
        raise InputError("field 'assignments' must be an object")

    colors = [None] * instance.num_subsets
    for key, color in assignments.items():
        if not _KEY.fullmatch(key):
            raise InputError(f"non-canonical subset key {key!r}")
        members = tuple(int(m) for m in key.split(","))
        if any(a >= b for a, b in zip(members, members[1:])):
            raise InputError(f"non-canonical subset key {key!r}: members must be strictly increasing")
        if len(members) != k or members[-1] > n:
            raise InputError(f"subset key {key!r} is not a {k}-subset of 1..{n}")
        if not isinstance(color, int) or isinstance(color, bool) or color < 0:
            raise InputError(f"color for key {key!r} must be a non-negative integer, got {color!r}")
        colors[rank_subset(instance, KSubset(members))] = color

    if None in colors:
        missing = unrank_subset(instance, colors.index(None))
        raise InputError(f"missing subset key {missing.key!r}")
    used = set(colors)
    for c in range(max(used) + 1):
        if c not in used:
            raise InputError(f"color ids are not dense: color {c} is never used")
    return Coloring(instance, tuple(colors))


def emit_coloring_file(coloring: Coloring) -> str:
    inst = coloring.instance
    lines = [f'  "{s.key}": {c}' for s, c in zip(inst._subsets, coloring.assignment)]
    return (
        "{\n"
        f'"n": {inst.n},\n"k": {inst.k},\n'
        '"assignments": {\n' + ",\n".join(lines) + "\n}\n}\n"
    )


@dataclass(frozen=True)
class WitnessReport:
    a: tuple
    b: tuple
    color: int
    method: str  # "geometric" or "brute"
    seed: int
    direction: Optional[tuple] = None
    elapsed_ms: Optional[float] = None

    @classmethod
    def from_witness(cls, w: WitnessPair, seed: int, elapsed_ms: Optional[float] = None) -> "WitnessReport":
        return cls(w.a.members, w.b.members, w.color, w.provenance, seed, w.direction, elapsed_ms)

    def to_dict(self) -> dict:
        out = {
            "witness": {"a": list(self.a), "b": list(self.b), "color": self.color},
            "method": self.method,
            "seed": self.seed,
        }
        if self.direction is not None:
            out["direction"] = list(self.direction)
        if self.elapsed_ms is not None:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def emit_witness_report(report: WitnessReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def parse_witness_report(text: str) -> WitnessReport:
    data = _load(text)
    try:
        w = data["witness"]
        direction = data.get("direction")
        report = WitnessReport(
            a=tuple(w["a"]),
            b=tuple(w["b"]),
            color=w["color"],
            method=data["method"],
            seed=data["seed"],
            direction=None if direction is None else tuple(float(v) for v in direction),
            elapsed_ms=data.get("elapsed_ms"),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed witness report: {exc}") from None
    if report.method not in ("geometric", "brute"):
        raise InputError(f"unknown method {report.method!r}")
    return report
