"""Point configurations on the moment curve, k-gon projections, Helly on the
line and hyperplane side counting.

Two layers live side by side: exact rationals (``fractions.Fraction``) for the
general-position certificates, IEEE doubles for everything the search touches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Optional, Sequence, Union

import numpy as np

from .core import KSubset
from .errors import CapacityError, InputError

GENPOS_CAP = 10**6
ON_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    """n points in R^d, row i is point i+1. ``params`` is set for moment-curve configs."""

    points_exact: tuple
    points_float: np.ndarray
    params: Optional[tuple] = None

    @property
    def n(self) -> int:
        return len(self.points_exact)

    @property
    def d(self) -> int:
        return len(self.points_exact[0])

    @classmethod
    def from_points(cls, points: Sequence[Sequence]) -> "PointConfiguration":
        """Arbitrary rational points; general position is then checked, not assumed."""
        exact = tuple(tuple(Fraction(c) for c in p) for p in points)
        if not exact or len({len(p) for p in exact}) != 1 or len(exact[0]) == 0:
            raise InputError("points must be a nonempty list of equal-length coordinate tuples")
        floats = np.array([[float(c) for c in p] for p in exact], dtype=float)
        floats.setflags(write=False)
        return cls(exact, floats)

    @classmethod
    def from_params(cls, params: Sequence, d: int) -> "PointConfiguration":
        """Moment-curve points (t, t^2, ..., t^d) for strictly increasing t."""
        if d < 1:
            raise InputError(f"dimension must be >= 1, got {d}")
        ts = tuple(Fraction(t) for t in params)
        if not ts:
            raise InputError("need at least one parameter")
        if any(a >= b for a, b in zip(ts, ts[1:])):
            raise InputError("moment-curve parameters must be strictly increasing")
        exact = tuple(tuple(t**j for j in range(1, d + 1)) for t in ts)
        floats = np.array([[float(c) for c in p] for p in exact], dtype=float)
        floats.setflags(write=False)
        return cls(exact, floats, ts)


def moment_curve_config(n: int, d: int) -> PointConfiguration:
    if n < 1 or d < 1:
        raise InputError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    return PointConfiguration.from_params([Fraction(i, n + 1) for i in range(1, n + 1)], d)


class Direction:
    """Unit vector in R^d; normalized on construction."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        v = np.array(coords, dtype=float).reshape(-1)
        norm = float(np.linalg.norm(v))
        if v.size == 0 or not np.isfinite(norm) or norm == 0.0:
            raise InputError(f"cannot normalize direction {coords!r}")
        v = v / norm
        v.setflags(write=False)
        self.coords = v

    @property
    def d(self) -> int:
        return self.coords.size

    def antipode(self) -> "Direction":
        out = object.__new__(Direction)
        v = -self.coords
        v.setflags(write=False)
        out.coords = v
        return out

    def canonical(self) -> "Direction":
        """The representative of {x, -x} whose first nonzero coordinate is positive."""
        nz = np.flatnonzero(self.coords)
        if nz.size and self.coords[nz[0]] < 0:
            return self.antipode()
        return self

    def __iter__(self):
        return iter(self.coords.tolist())

    def __eq__(self, other):
        return isinstance(other, Direction) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __repr__(self):
        return f"Direction({self.coords.tolist()})"


DirectionLike = Union[Direction, Sequence[float], np.ndarray]


def as_direction(x: DirectionLike) -> Direction:
    return x if isinstance(x, Direction) else Direction(x)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise InputError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    def contains(self, v: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= v <= self.hi + tol

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2


@dataclass(frozen=True)
class Intersection:
    interval: Interval


@dataclass(frozen=True)
class DisjointPair:
    """Interval ``i`` lies strictly to the right of interval ``j``."""

    i: int
    j: int


@dataclass(frozen=True)
class Hyperplane:
    """The plane {p : <p, normal> = offset}."""

    normal: Direction
    offset: float

    def flipped(self) -> "Hyperplane":
        return Hyperplane(self.normal.antipode(), -self.offset)


def _exact_nonzero_det(rows: Sequence[Sequence[Fraction]]) -> bool:
    """Whether a square rational matrix is nonsingular, via fraction-free Bareiss.

    Each row is scaled to integers first; row scaling never changes singularity.
    """
    m = []
    for row in rows:
        den = lcm(*(c.denominator for c in row))
        m.append([int(c * den) for c in row])
    size = len(m)
    prev = 1
    for p in range(size):
        if m[p][p] == 0:
            swap = next((r for r in range(p + 1, size) if m[r][p] != 0), None)
            if swap is None:
                return False
            m[p], m[swap] = m[swap], m[p]
        piv = m[p][p]
        for r in range(p + 1, size):
            mr = m[r]
            f = mr[p]
            for c in range(p + 1, size):
                mr[c] = (mr[c] * piv - m[p][c] * f) // prev
            mr[p] = 0
        prev = piv
    return m[-1][-1] != 0


def exact_determinant(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by Gaussian elimination over the rationals."""
    m = [[Fraction(c) for c in row] for row in rows]
    size = len(m)
    det = Fraction(1)
    for p in range(size):
        piv_row = next((r for r in range(p, size) if m[r][p] != 0), None)
        if piv_row is None:
            return Fraction(0)
        if piv_row != p:
            m[p], m[piv_row] = m[piv_row], m[p]
            det = -det
        piv = m[p][p]
        det *= piv
        for r in range(p + 1, size):
            f = m[r][p] / piv
            if f:
                for c in range(p, size):
                    m[r][c] -= f * m[p][c]
    return det


def general_position_check(config: PointConfiguration, cap: int = GENPOS_CAP) -> bool:
    """Exact certificate that every d+1 of the points are affinely independent."""
    n, d = config.n, config.d
    if n <= d:
        return True
    if comb(n, d + 1) > cap:
        raise CapacityError(f"C({n},{d + 1}) = {comb(n, d + 1)} determinants exceeds cap {cap}")
    lifted = [(Fraction(1),) + p for p in config.points_exact]
    return all(
        _exact_nonzero_det([lifted[i] for i in idx])
        for idx in itertools.combinations(range(n), d + 1)
    )


def exact_hyperplane_through(config: PointConfiguration, indices: Sequence[int]):
    """Exact (normal, offset) of the hyperplane through d affinely independent points.

    ``indices`` are zero-based. Returns None when the points do not span a
    unique hyperplane.
    """
    d = config.d
    if len(indices) != d:
        raise InputError(f"need exactly d={d} points, got {len(indices)}")
    # unknowns (a_1..a_d, b): <p, a> - b = 0 for every chosen p
    m = [list(config.points_exact[i]) + [Fraction(-1)] for i in indices]
    cols = d + 1
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(cols) if c not in pivots]
    if len(free) != 1:
        return None
    sol = [Fraction(0)] * cols
    sol[free[0]] = Fraction(1)
    for row, c in zip(m, pivots):
        sol[c] = -row[free[0]]
    normal, offset = sol[:d], sol[d]
    if all(a == 0 for a in normal):
        return None
    return tuple(normal), offset


def max_points_on_spanned_hyperplane(config: PointConfiguration) -> int:
    """Largest exact point count on any hyperplane spanned by d configuration points."""
    n, d = config.n, config.d
    if n < d:
        return n
    best = 0
    for idx in itertools.combinations(range(n), d):
        plane = exact_hyperplane_through(config, idx)
        if plane is None:
            # d affinely dependent points lie on infinitely many hyperplanes
            return n
        normal, offset = plane
        on = sum(1 for p in config.points_exact if sum(a * c for a, c in zip(normal, p)) == offset)
        best = max(best, on)
    return best


def project_points(config: PointConfiguration, x: DirectionLike) -> np.ndarray:
    """Signed coordinates of all points along x.

    Every projection in the package goes through one full product, so a vertex
    shared by two k-gons always gets the same float.
    """
    return config.points_float @ as_direction(x).coords


def project_subset(config: PointConfiguration, s: KSubset, x: DirectionLike) -> Interval:
    """Projection of the k-gon on the line spanned by x: the span of its vertex projections."""
    if s.members[-1] > config.n:
        raise InputError(f"subset {s.key} has members outside 1..{config.n}")
    vals = project_points(config, x)[np.asarray(s.members) - 1]
    return Interval(float(vals.min()), float(vals.max()))


def helly_bounds(lo: np.ndarray, hi: np.ndarray):
    """(LO, argmax lo, HI, argmin hi) with first-index tie-breaks."""
    i = int(np.argmax(lo))
    j = int(np.argmin(hi))
    return float(lo[i]), i, float(hi[j]), j


def helly_1d(intervals: Sequence[Interval]) -> Union[Intersection, DisjointPair]:
    """Common intersection of a family of intervals, or a disjoint pair.

    On the line, a family meets iff the largest left end is at most the
    smallest right end; otherwise the intervals attaining those two ends are
    themselves disjoint.
    """
    if not intervals:
        raise InputError("helly_1d needs at least one interval")
    lo = np.array([iv.lo for iv in intervals], dtype=float)
    hi = np.array([iv.hi for iv in intervals], dtype=float)
    LO, i, HI, j = helly_bounds(lo, hi)
    if LO <= HI:
        return Intersection(Interval(LO, HI))
    return DisjointPair(i, j)


def side_counts(config: PointConfiguration, h: Hyperplane, tol: float = ON_TOL) -> tuple:
    """(left, on, right) counts of the points against h; "left" is the negative side."""
    s = config.points_float @ h.normal.coords - h.offset
    on = np.abs(s) <= tol
    left = int(np.count_nonzero((s < 0) & ~on))
    right = int(np.count_nonzero((s > 0) & ~on))
    return left, int(np.count_nonzero(on)), right
