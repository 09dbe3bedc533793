"""Witness finding: the Kneser theorem run as an algorithm.

If every color class had pairwise intersecting projections in every
direction, the coincidence direction of the color systems would give a
hyperplane meeting every k-gon, which would have to contain n-2k+2 points of
a configuration in general position. So for a coloring with at most n-2k+1
colors some direction separates two same-colored k-gons. The geometric
search hunts for such a direction; the brute-force oracle backs it up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .borsuk_ulam import find_coincidence_direction
from .core import Coloring, KneserInstance, WitnessPair, are_disjoint, verify_coloring
from .errors import BudgetError, InputError, PreconditionError
from .geometry import (
    Direction,
    DirectionLike,
    Hyperplane,
    Interval,
    PointConfiguration,
    as_direction,
    helly_bounds,
    side_counts,
)
from .systems import CoincidenceResult, HellyFailure, color_systems

# directions x subsets x k entries materialized per scan chunk
_CHUNK_ENTRIES = 2_000_000


@dataclass(frozen=True)
class SearchParams:
    grid_size: int = 512
    max_rounds: int = 8
    gap_tol: float = 1e-9
    shrink: float = 0.5
    seed: int = 0
    # initial radius of the local grids in rounds >= 1
    radius: float = 0.5
    # coincidence search: starts and evaluations per start
    starts: int = 8
    budget: int = 2000
    workers: int = 1

    def __post_init__(self):
        if self.grid_size < 1:
            raise InputError("grid_size must be >= 1")
        if self.max_rounds < 1:
            raise InputError("max_rounds must be >= 1")
        if not 0 < self.shrink < 1:
            raise InputError("shrink must lie in (0, 1)")


class _ColorTables:
    """Projection tables for scanning many directions at once."""

    def __init__(self, config: PointConfiguration, coloring: Coloring):
        self.config = config
        self.coloring = coloring
        inst = coloring.instance
        self.ranks = np.concatenate(coloring.classes)
        self.index = inst.member_index[self.ranks]
        sizes = [len(c) for c in coloring.classes]
        self.starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.intp)
        self.stops = self.starts + np.asarray(sizes, dtype=np.intp)

    def bounds(self, dirs: np.ndarray):
        proj = dirs @ self.config.points_float.T
        vals = proj[:, self.index]
        lo = vals.min(axis=2)
        hi = vals.max(axis=2)
        LO = np.maximum.reduceat(lo, self.starts, axis=1)
        HI = np.minimum.reduceat(hi, self.starts, axis=1)
        return lo, hi, LO, HI

    def pair(self, lo_row, hi_row, color: int):
        a, b = self.starts[color], self.stops[color]
        _, i, _, j = helly_bounds(lo_row[a:b], hi_row[a:b])
        subsets = self.coloring.instance._subsets
        sa, sb = subsets[int(self.ranks[a + i])], subsets[int(self.ranks[a + j])]
        return (sa, sb) if sa < sb else (sb, sa)

    def scan(self, dirs: np.ndarray, gap_tol: float):
        """First validated witness over dirs in (direction, color) order, plus
        the smallest coincidence gap among directions without failures."""
        per_dir = max(1, self.index.size)
        chunk = max(1, _CHUNK_ENTRIES // per_dir)
        best_gap, best_dir = math.inf, None
        for start in range(0, len(dirs), chunk):
            block = dirs[start:start + chunk]
            lo, hi, LO, HI = self.bounds(block)
            fail = LO - HI > gap_tol
            for g, c in np.argwhere(fail):
                a, b = self.pair(lo[g], hi[g], int(c))
                witness = _validated(self.coloring, a, b, int(c), block[g])
                if witness is not None:
                    return witness, best_gap, best_dir
            ok = ~fail.any(axis=1)
            if ok.any():
                mids = (LO[ok] + HI[ok]) / 2
                gaps = mids.max(axis=1) - mids.min(axis=1)
                g = int(np.argmin(gaps))
                if gaps[g] < best_gap:
                    best_gap, best_dir = float(gaps[g]), block[np.flatnonzero(ok)[g]]
        return None, best_gap, best_dir


def _validated(coloring: Coloring, a, b, color: int, direction) -> Optional[WitnessPair]:
    if a == b or not are_disjoint(a, b):
        return None
    if coloring.color_of(a) != color or coloring.color_of(b) != color:
        return None
    return WitnessPair(a, b, color, "geometric", tuple(float(v) for v in direction))


def _canonical_rows(x: np.ndarray) -> np.ndarray:
    x = x / np.linalg.norm(x, axis=1, keepdims=True)
    first = np.argmax(x != 0, axis=1)
    signs = np.where(x[np.arange(len(x)), first] < 0, -1.0, 1.0)
    return x * signs[:, None]


def _dedup_antipodes(x: np.ndarray) -> np.ndarray:
    _, keep = np.unique(np.round(x, 12), axis=0, return_index=True)
    return x[np.sort(keep)]


def direction_grid(d: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Normalized Gaussian samples in canonical sign, antipodal duplicates removed."""
    return _dedup_antipodes(_canonical_rows(rng.standard_normal((size, d))))


def _coincidence_systems(config, coloring):
    """The d systems handed to the coincidence search.

    Colorings with fewer than d colors repeat the last color; colorings with
    more than d colors use the first d.
    """
    systems = color_systems(config, coloring)
    d = coloring.instance.d
    if len(systems) < d:
        systems += [systems[-1]] * (d - len(systems))
    return systems[:d]


def geometric_witness_search(
    instance: KneserInstance,
    config: PointConfiguration,
    coloring: Coloring,
    params: Optional[SearchParams] = None,
) -> Optional[WitnessPair]:
    """Search directions for a Helly failure; None when none was found.

    Round 0 scans a seeded global grid, then runs the coincidence search,
    whose probes are also checked for failures. Each later round scans a
    local grid around the smallest-gap direction seen so far, with the radius
    shrinking geometrically.
    """
    params = params or SearchParams()
    if coloring.instance != instance:
        raise InputError("coloring belongs to a different instance")
    if config.n != instance.n or config.d != instance.d:
        raise InputError(f"configuration must hold {instance.n} points in R^{instance.d}")
    tables = _ColorTables(config, coloring)
    rng = np.random.default_rng(params.seed)
    d = instance.d
    best_gap, best_dir = math.inf, None

    for rnd in range(params.max_rounds):
        if rnd == 0:
            dirs = direction_grid(d, params.grid_size, rng)
        else:
            if best_dir is None:
                dirs = direction_grid(d, params.grid_size, rng)
            else:
                radius = params.radius * params.shrink ** (rnd - 1)
                local = best_dir + radius * rng.standard_normal((params.grid_size, d))
                dirs = _dedup_antipodes(_canonical_rows(local))
        witness, gap, where = tables.scan(dirs, params.gap_tol)
        if witness is not None:
            return witness
        if gap < best_gap:
            best_gap, best_dir = gap, where

        if rnd == 0:
            try:
                found = find_coincidence_direction(
                    _coincidence_systems(config, coloring),
                    tol=params.gap_tol,
                    starts=params.starts,
                    seed=params.seed,
                    budget=params.budget,
                    margin=params.gap_tol,
                    x0=best_dir,
                    workers=params.workers,
                )
            except BudgetError:
                found = None
            if isinstance(found, HellyFailure):
                witness = _validated(coloring, found.a, found.b, found.color, found.direction)
                if witness is not None:
                    return witness
            elif isinstance(found, CoincidenceResult):
                x = found.direction.canonical().coords
                witness, gap, where = tables.scan(x[None, :], params.gap_tol)
                if witness is not None:
                    return witness
                if gap < best_gap:
                    best_gap, best_dir = gap, where
    return None


def hybrid_witness(
    instance: KneserInstance,
    config: PointConfiguration,
    coloring: Coloring,
    params: Optional[SearchParams] = None,
) -> WitnessPair:
    """Geometric search first, exhaustive oracle second; always returns a pair."""
    if coloring.num_colors > instance.d:
        raise PreconditionError(
            f"coloring uses {coloring.num_colors} colors but the theorem needs at most n-2k+1 = {instance.d}"
        )
    witness = geometric_witness_search(instance, config, coloring, params)
    if witness is None:
        witness = verify_coloring(coloring)
    if witness is None:
        raise AssertionError("no disjoint monochromatic pair; the coloring contradicts the Kneser theorem")
    return witness


@dataclass(frozen=True)
class DiagnosticReport:
    direction: Direction
    per_color: tuple  # Interval or HellyFailure per color id
    gamma: Hyperplane
    counts: tuple  # (left, on, right)
    transversal: bool  # gamma's offset lies in every color's intersection (within tol)
    left_below_k: bool
    right_below_k: bool
    on_at_least_capacity: bool


def contradiction_diagnostic(
    instance: KneserInstance,
    config: PointConfiguration,
    coloring: Coloring,
    direction: DirectionLike,
    tol: float = 1e-9,
) -> DiagnosticReport:
    """Build the would-be transversal hyperplane at ``direction`` and count points around it."""
    x = as_direction(direction)
    tables = _ColorTables(config, coloring)
    lo, hi, LO, HI = tables.bounds(x.coords[None, :])
    per_color: list[Union[Interval, HellyFailure]] = []
    for c in range(coloring.num_colors):
        if LO[0, c] <= HI[0, c]:
            per_color.append(Interval(float(LO[0, c]), float(HI[0, c])))
        else:
            a, b = tables.pair(lo[0], hi[0], c)
            per_color.append(HellyFailure(c, a, b, tuple(x.coords.tolist()), float(LO[0, c] - HI[0, c])))
    mids = [iv.midpoint for iv in per_color if isinstance(iv, Interval)]
    offset = float(np.mean(mids)) if mids else 0.0
    gamma = Hyperplane(x, offset)
    left, on, right = side_counts(config, gamma, tol)
    transversal = all(isinstance(iv, Interval) and iv.contains(offset, tol) for iv in per_color)
    return DiagnosticReport(
        direction=x,
        per_color=tuple(per_color),
        gamma=gamma,
        counts=(left, on, right),
        transversal=transversal,
        left_below_k=left < instance.k,
        right_below_k=right < instance.k,
        on_at_least_capacity=on >= instance.n - 2 * instance.k + 2,
    )
