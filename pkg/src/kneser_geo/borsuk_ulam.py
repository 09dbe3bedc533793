"""Numerical zero search for odd maps S^(d-1) -> R^(d-1).

Borsuk-Ulam guarantees a zero for every continuous odd map; it does not say
how to find one. On the circle an odd scalar map changes sign between x(0)
and x(pi) = -x(0), so bisection in the angle is guaranteed. On higher spheres
the search is a multi-start local minimization of ||f||^2 and may come back
empty.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import BudgetError, InputError
from .geometry import Direction
from .systems import CoincidenceResult, ColorSystem, HellyFailure, SystemBundle

CIRCLE_BUDGET = 200
SPHERE_BUDGET = 10_000
FD_STEP = 1e-6
MIN_STEP = 1e-10
ODDNESS_TOL = 1e-9


@dataclass
class OddMapEval:
    """An odd map on the unit sphere of R^dim, with a per-solve call budget.

    ``func`` receives a unit vector (numpy array) and returns dim-1 values.
    """

    dim: int
    func: Callable
    budget: Optional[int] = None

    def __post_init__(self):
        if self.dim < 2:
            raise InputError(f"odd maps need dim >= 2, got {self.dim}")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.func(x), dtype=float))


@dataclass(frozen=True)
class ZeroResult:
    direction: Direction
    residual: float
    calls_used: int


class _Exhausted(Exception):
    pass


class _Counted:
    def __init__(self, f: OddMapEval, budget: int):
        self.f = f
        self.budget = budget
        self.calls = 0

    def __call__(self, x):
        if self.calls >= self.budget:
            raise _Exhausted
        self.calls += 1
        return self.f(x)


def _check_oddness(f: OddMapEval, rng: np.random.Generator, samples: int = 3) -> None:
    for _ in range(samples):
        x = rng.standard_normal(f.dim)
        x /= np.linalg.norm(x)
        fx, fm = f(x), f(-x)
        if fx.shape != (f.dim - 1,):
            raise InputError(f"odd map on S^{f.dim - 1} must return {f.dim - 1} values, got {fx.shape}")
        if np.max(np.abs(fx + fm)) > ODDNESS_TOL:
            raise InputError(f"map is not odd: |f(x) + f(-x)| = {np.max(np.abs(fx + fm)):.3g} at x={x.tolist()}")


def _canonical_sign(x: np.ndarray) -> float:
    nz = np.flatnonzero(x)
    return -1.0 if nz.size and x[nz[0]] < 0 else 1.0


def find_zero_on_circle(f: OddMapEval, tol: float = 1e-12) -> ZeroResult:
    """Bisection on the angle over [0, pi] for an odd scalar map on the circle.

    Values are always taken at the canonical representative of x(theta), so
    the residual reported is exactly |f| at the returned direction.
    """
    if f.dim != 2:
        raise InputError(f"circle search needs dim 2, got {f.dim}")
    _check_oddness(f, np.random.default_rng(0))
    budget = f.budget or CIRCLE_BUDGET
    calls = 0

    def g(theta):
        nonlocal calls
        if calls >= budget:
            raise BudgetError(f"circle bisection used its {budget} evaluations before reaching tol={tol}")
        calls += 1
        x = np.array([math.cos(theta), math.sin(theta)])
        s = _canonical_sign(x)
        x = Direction(s * x)
        return s * float(f(x.coords)[0]), x

    lo, hi = 0.0, math.pi
    g_lo, x = g(lo)
    if abs(g_lo) <= tol:
        return ZeroResult(x, abs(g_lo), calls)
    sign_lo = g_lo > 0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            raise BudgetError(f"bisection bracket collapsed at theta={mid} without |f| <= {tol}")
        g_mid, x = g(mid)
        if abs(g_mid) <= tol:
            return ZeroResult(x, abs(g_mid), calls)
        if (g_mid > 0) == sign_lo:
            lo = mid
        else:
            hi = mid


def _retract(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _descend(f: _Counted, x: np.ndarray, tol: float):
    """Projected Gauss-Newton / gradient descent of ||f||^2 on the sphere.

    Derivatives are central differences along an orthonormal tangent basis,
    evaluated on the sphere. Each step is backtracked by halving until the
    objective decreases; the Gauss-Newton direction is tried first and the
    plain gradient is the fallback.
    """
    d = x.size
    fx = f(x)
    obj = float(fx @ fx)
    try:
        while math.sqrt(obj) > tol:
            basis = np.linalg.qr(np.column_stack([x, np.eye(d)]))[0][:, 1:]
            jac = np.empty((fx.size, d - 1))
            for j in range(d - 1):
                u = FD_STEP * basis[:, j]
                jac[:, j] = (f(_retract(x + u)) - f(_retract(x - u))) / (2 * FD_STEP)
            grad = 2.0 * jac.T @ fx
            gn = -np.linalg.lstsq(jac, fx, rcond=None)[0]
            gnorm2 = float(grad @ grad)
            candidates = [gn]
            if gnorm2 > 0:
                candidates.append(-grad * (obj / gnorm2))
            moved = False
            for step in candidates:
                length = float(np.linalg.norm(step))
                if not np.isfinite(length) or length == 0.0:
                    continue
                if length > 1.0:
                    step, length = step / length, 1.0
                t = 1.0
                while t * length >= MIN_STEP:
                    x_new = _retract(x + basis @ (t * step))
                    f_new = f(x_new)
                    obj_new = float(f_new @ f_new)
                    if obj_new < obj:
                        x, fx, obj, moved = x_new, f_new, obj_new, True
                        break
                    t *= 0.5
                if moved:
                    break
            if not moved:
                break
    except _Exhausted:
        pass
    return x, fx


def _seeded_starts(d: int, starts: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    out, seen = [], set()
    for _ in range(starts):
        x = rng.standard_normal(d)
        x = _retract(x)
        x = _canonical_sign(x) * x
        key = tuple(np.round(x, 12))
        if key not in seen:
            seen.add(key)
            out.append(x)
    return out


def _sphere_search(f: OddMapEval, tol: float, starts: int, seed: int, x0=None, workers: int = 1):
    budget = f.budget or SPHERE_BUDGET
    points = _seeded_starts(f.dim, starts, seed)
    if x0 is not None:
        points.insert(0, _retract(np.asarray(x0, dtype=float)))

    def run(start):
        counted = _Counted(f, budget)
        x, _ = _descend(counted, start, tol)
        x = Direction(x).canonical()
        # residual is re-taken at the stored, renormalized coordinates
        fx = f(x.coords)
        counted.calls += 1
        return ZeroResult(x, float(np.linalg.norm(fx)), counted.calls)

    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, points))
    else:
        results = [run(p) for p in points]
    return min(results, key=lambda r: (r.residual, tuple(r.direction.coords.tolist())))


def find_zero_on_sphere(
    f: OddMapEval,
    tol: float = 1e-9,
    starts: int = 32,
    seed: int = 0,
    x0=None,
    workers: int = 1,
) -> Optional[ZeroResult]:
    """Best zero found from seeded uniform starts, or None if none reaches tol.

    ``f.budget`` caps the evaluations of each start (default 10^4). ``x0``, if
    given, is tried before the seeded starts.
    """
    if f.dim < 3:
        raise InputError("use find_zero_on_circle for dim 2")
    _check_oddness(f, np.random.default_rng(seed))
    best = _sphere_search(f, tol, starts, seed, x0, workers)
    return best if best.residual <= tol else None


class _FailureFound(Exception):
    def __init__(self, failure: HellyFailure):
        super().__init__(failure)
        self.failure = failure


def find_coincidence_direction(
    systems: Sequence[ColorSystem],
    tol: float = 1e-9,
    starts: int = 32,
    seed: int = 0,
    budget: Optional[int] = None,
    margin: float = 0.0,
    x0=None,
    workers: int = 1,
) -> Union[CoincidenceResult, HellyFailure, None]:
    """Direction where all d systems pick the same hyperplane.

    Any Helly failure met at a probed direction aborts the search and is
    returned instead. For d >= 3 the search may fail, giving None.
    """
    systems = list(systems)
    if not systems:
        raise InputError("need at least one system")
    d = systems[0].instance.d
    if len(systems) != d:
        raise InputError(f"need exactly d={d} systems, got {len(systems)}")
    bundle = SystemBundle(systems)

    if d == 1:
        x = Direction([1.0])
        out = bundle.evaluate(x, margin)
        if isinstance(out, HellyFailure):
            return out
        return CoincidenceResult(x, tuple(out.tolist()))

    def psi_map(x):
        out = bundle.evaluate(x, margin)
        if isinstance(out, HellyFailure):
            raise _FailureFound(out)
        return out[:-1] - out[-1]

    f = OddMapEval(d, psi_map, budget)
    try:
        if d == 2:
            zero = find_zero_on_circle(f, tol)
        else:
            zero = find_zero_on_sphere(f, tol, starts, seed, x0=x0, workers=workers)
    except _FailureFound as hit:
        return hit.failure
    if zero is None:
        return None
    out = bundle.evaluate(zero.direction, margin)
    if isinstance(out, HellyFailure):
        return out
    return CoincidenceResult(zero.direction, tuple(out.tolist()))


def random_linear_map(d: int, rng: np.random.Generator) -> OddMapEval:
    """x -> A x for a Gaussian (d-1) x d matrix A."""
    a = rng.standard_normal((d - 1, d))
    return OddMapEval(d, lambda x: a @ x)


def random_trig_map(d: int, rng: np.random.Generator, degree: int = 7) -> OddMapEval:
    """Random odd trigonometric map.

    On the circle this is sum over odd m <= degree of a_m cos(m theta) +
    b_m sin(m theta), with theta the angle of x; odd harmonics flip sign
    under theta -> theta + pi. For d >= 3 each component is a sum of
    sin(m <w, x>) terms over odd m, which are odd in x.
    """
    harmonics = np.arange(1, degree + 1, 2)
    if d == 2:
        a = rng.standard_normal(harmonics.size)
        b = rng.standard_normal(harmonics.size)

        def f(x):
            theta = math.atan2(x[1], x[0])
            return [float(a @ np.cos(harmonics * theta) + b @ np.sin(harmonics * theta))]

        return OddMapEval(2, f)
    coef = rng.standard_normal((d - 1, harmonics.size))
    w = rng.standard_normal((d - 1, harmonics.size, d)) / np.sqrt(d)

    def g(x):
        return np.sum(coef * np.sin(harmonics * (w @ x)), axis=1)

    return OddMapEval(d, g)
