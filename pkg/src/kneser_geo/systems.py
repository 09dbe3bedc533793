"""Hyperplane systems induced by color classes.

For a color class and a direction x, project every k-gon of the class on the
line through x. If the projected intervals share a point, the class picks the
hyperplane orthogonal to x through the midpoint of their common intersection;
its signed offset is phi(x). Negating x reflects every interval, so
phi(-x) = -phi(x). If two projections are disjoint the class has no common
point at x, and the two k-gons behind it are disjoint subsets of one color.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .core import Coloring, KneserInstance, KSubset
from .errors import InputError
from .geometry import Direction, DirectionLike, PointConfiguration, as_direction, helly_bounds


@dataclass(frozen=True)
class HellyFailure:
    """Two same-colored subsets whose projections along ``direction`` are disjoint."""

    color: int
    a: KSubset
    b: KSubset
    direction: tuple
    separation: float


@dataclass(frozen=True, eq=False)
class ColorSystem:
    config: PointConfiguration
    coloring: Coloring
    color: int

    def __post_init__(self):
        if not 0 <= self.color < self.coloring.num_colors:
            raise InputError(f"color {self.color} not used by the coloring")
        if self.config.n != self.coloring.instance.n:
            raise InputError("configuration and coloring disagree on n")

    @property
    def instance(self) -> KneserInstance:
        return self.coloring.instance

    @cached_property
    def members(self) -> np.ndarray:
        return self.coloring.classes[self.color]

    @cached_property
    def member_index(self) -> np.ndarray:
        return self.instance.member_index[self.members]


def color_systems(config: PointConfiguration, coloring: Coloring) -> list[ColorSystem]:
    return [ColorSystem(config, coloring, c) for c in range(coloring.num_colors)]


@dataclass(frozen=True)
class CoincidenceResult:
    direction: Direction
    offsets: tuple

    @property
    def gap(self) -> float:
        return max(self.offsets) - min(self.offsets)


class SystemBundle:
    """Evaluates several systems over one configuration with a single projection."""

    def __init__(self, systems: Sequence[ColorSystem]):
        if not systems:
            raise InputError("need at least one system")
        config = systems[0].config
        if any(s.config is not config for s in systems):
            raise InputError("all systems must share one point configuration")
        self.systems = list(systems)
        self.points = config.points_float
        self.index = np.concatenate([s.member_index for s in systems])
        sizes = [len(s.members) for s in systems]
        self.starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.intp)

    def evaluate(self, x: DirectionLike, margin: float = 0.0):
        """Vector of offsets, or the first HellyFailure in system order."""
        x = as_direction(x)
        proj = self.points @ x.coords
        vals = proj[self.index]
        lo = vals.min(axis=1)
        hi = vals.max(axis=1)
        LO = np.maximum.reduceat(lo, self.starts)
        HI = np.minimum.reduceat(hi, self.starts)
        bad = np.flatnonzero(LO - HI > margin)
        if bad.size:
            return self._failure(int(bad[0]), lo, hi, x)
        return (LO + HI) / 2

    def _failure(self, pos: int, lo, hi, x: Direction) -> HellyFailure:
        system = self.systems[pos]
        start = self.starts[pos]
        stop = start + len(system.members)
        LO, i, HI, j = helly_bounds(lo[start:stop], hi[start:stop])
        subsets = system.instance._subsets
        a = subsets[int(system.members[i])]
        b = subsets[int(system.members[j])]
        if b < a:
            a, b = b, a
        return HellyFailure(system.color, a, b, tuple(x.coords.tolist()), LO - HI)


def phi(system: ColorSystem, x: DirectionLike, margin: float = 0.0) -> Union[float, HellyFailure]:
    """Offset of the system's hyperplane at x, or the Helly failure blocking it.

    A failure is reported only when the projections are separated by more
    than ``margin``.
    """
    out = SystemBundle([system]).evaluate(x, margin)
    if isinstance(out, HellyFailure):
        return out
    return float(out[0])


def psi(systems: Sequence[ColorSystem], x: DirectionLike, margin: float = 0.0):
    """(phi_1 - phi_d, ..., phi_{d-1} - phi_d) at x, or the first Helly failure."""
    systems = list(systems)
    if not systems:
        raise InputError("psi needs at least one system")
    d = systems[0].instance.d
    if len(systems) != d:
        raise InputError(f"psi needs exactly d={d} systems, got {len(systems)}")
    out = SystemBundle(systems).evaluate(x, margin)
    if isinstance(out, HellyFailure):
        return out
    return out[:-1] - out[-1]


def coincidence_gap(systems: Sequence[ColorSystem], x: DirectionLike, margin: float = 0.0):
    """Largest pairwise distance between the systems' offsets at x."""
    out = SystemBundle(list(systems)).evaluate(x, margin)
    if isinstance(out, HellyFailure):
        return out
    return float(out.max() - out.min())

