import math

import numpy as np
import pytest
import sympy

from kneser_geo import (
    BudgetError,
    CoincidenceResult,
    ColorSystem,
    HellyFailure,
    InputError,
    KneserInstance,
    OddMapEval,
    canonical_coloring,
    find_coincidence_direction,
    find_zero_on_circle,
    find_zero_on_sphere,
    moment_curve_config,
)
from kneser_geo.borsuk_ulam import random_linear_map, random_trig_map
from test_systems import CFG52, FIVE_TWO, coloring_from_classes, singleton_systems


def exact_null_vector(a):
    m = sympy.Matrix([[sympy.Rational(float(v)) for v in row] for row in a])
    (v,) = m.nullspace()
    v = np.array([float(c) for c in v])
    return v / np.linalg.norm(v)


def angle(u, v):
    c = abs(float(np.dot(u, v)))
    return math.acos(min(1.0, c))


class TestCircle:
    def test_diagonal(self):
        out = find_zero_on_circle(OddMapEval(2, lambda x: x[0] - x[1]))
        assert out.residual <= 1e-12
        assert np.allclose(out.direction.coords, [math.sqrt(0.5)] * 2, atol=1e-12)

    def test_first_coordinate(self):
        out = find_zero_on_circle(OddMapEval(2, lambda x: x[0]))
        assert np.allclose(out.direction.coords, [0, 1], atol=1e-12)

    def test_random_linear_functionals(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            w = rng.standard_normal(2) - rng.standard_normal(2)
            f = OddMapEval(2, lambda x, w=w: x @ w)
            out = find_zero_on_circle(f)
            assert abs(float(f(out.direction.coords)[0])) <= 1e-12
            assert out.residual == abs(float(f(out.direction.coords)[0]))

    def test_budget(self):
        with pytest.raises(BudgetError):
            find_zero_on_circle(OddMapEval(2, lambda x: x[0] - 0.3 * x[1], budget=3), tol=0.0)

    def test_rejects_non_odd(self):
        with pytest.raises(InputError):
            find_zero_on_circle(OddMapEval(2, lambda x: x[0] ** 2))

    def test_trig_maps(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            f = random_trig_map(2, rng)
            out = find_zero_on_circle(f, 1e-10)
            assert abs(float(f(out.direction.coords)[0])) <= 1e-10


class TestSphere:
    def test_coordinate_map(self):
        out = find_zero_on_sphere(OddMapEval(3, lambda x: x[:2]), tol=1e-8, starts=4, seed=1)
        assert out.residual <= 1e-8
        assert np.allclose(out.direction.coords, [0, 0, 1], atol=1e-8)

    @pytest.mark.parametrize("d", [3, 4, 5, 6])
    def test_linear_matches_null_space(self, d):
        for seed in range(10):
            a = np.random.default_rng(seed).standard_normal((d - 1, d))
            out = find_zero_on_sphere(OddMapEval(d, lambda x: a @ x), tol=1e-9, starts=8, seed=seed)
            assert out is not None
            assert angle(out.direction.coords, exact_null_vector(a)) <= 1e-6

    def test_budget_too_small(self):
        f = random_trig_map(5, np.random.default_rng(0))
        f.budget = 10
        assert find_zero_on_sphere(f, tol=1e-300, starts=4, seed=0) is None

    def test_rejects_non_odd(self):
        with pytest.raises(InputError):
            find_zero_on_sphere(OddMapEval(3, lambda x: x[:2] + 1.0))

    def test_rejects_wrong_shape(self):
        with pytest.raises(InputError):
            find_zero_on_sphere(OddMapEval(3, lambda x: x))

    def test_canonical_sign_and_antipode(self):
        rng = np.random.default_rng(8)
        for seed in range(20):
            f = random_linear_map(4, rng)
            out = find_zero_on_sphere(f, tol=1e-9, starts=4, seed=seed)
            x = out.direction.coords
            assert x[np.flatnonzero(x)[0]] > 0
            assert abs(np.linalg.norm(f(x)) - np.linalg.norm(f(-x))) <= 1e-9
            assert abs(np.linalg.norm(f(x)) - out.residual) <= 1e-12

    def test_deterministic_across_workers(self):
        f = random_trig_map(4, np.random.default_rng(2))
        runs = [find_zero_on_sphere(f, tol=1e-9, starts=8, seed=3, workers=w) for w in (1, 1, 4)]
        assert runs[0] == runs[1] == runs[2]


class TestCoincidence:
    def test_singleton_classes(self):
        out = find_coincidence_direction(singleton_systems(), tol=1e-9)
        assert isinstance(out, CoincidenceResult)
        assert out.gap <= 1e-9

    def test_identical_systems(self):
        a, _ = singleton_systems()
        out = find_coincidence_direction([a, a])
        assert out.gap == 0
        assert out.direction.coords.tolist() == [1.0, 0.0]

    def test_failure_surfaces(self):
        coloring = coloring_from_classes(FIVE_TWO, [[(2, 3), (4, 5)], [(1, 2)]])
        out = find_coincidence_direction([ColorSystem(CFG52, coloring, c) for c in (0, 1)])
        assert isinstance(out, HellyFailure)
        assert (out.a.members, out.b.members) == ((2, 3), (4, 5))

    def test_dimension_one(self):
        inst = KneserInstance(4, 2)
        cfg = moment_curve_config(4, 1)
        proper = find_coincidence_direction([ColorSystem(cfg, canonical_coloring(inst), 0)])
        assert isinstance(proper, CoincidenceResult) and proper.gap == 0
        constant = coloring_from_classes(inst, [])
        assert isinstance(find_coincidence_direction([ColorSystem(cfg, constant, 0)]), HellyFailure)

    @pytest.mark.parametrize("n,k", [(7, 2), (8, 3), (9, 3)])
    def test_higher_dimension_proper_stars(self, n, k):
        inst = KneserInstance(n, k)
        cfg = moment_curve_config(n, inst.d)
        coloring = canonical_coloring(inst)
        systems = [ColorSystem(cfg, coloring, c) for c in range(inst.d)]
        out = find_coincidence_direction(systems, tol=1e-9, starts=16, seed=1)
        assert isinstance(out, CoincidenceResult)
        assert out.gap <= 2e-9

    def test_wrong_count(self):
        with pytest.raises(InputError):
            find_coincidence_direction(singleton_systems()[:1])
