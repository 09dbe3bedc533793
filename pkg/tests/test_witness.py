import numpy as np
import pytest

from kneser_geo import (
    Coloring,
    HellyFailure,
    Interval,
    KneserInstance,
    KSubset,
    PreconditionError,
    SearchParams,
    canonical_coloring,
    contradiction_diagnostic,
    geometric_witness_search,
    hybrid_witness,
    moment_curve_config,
    random_coloring,
    verify_coloring,
)
from kneser_geo.witness import _ColorTables, direction_grid
from test_systems import coloring_from_classes

FIVE_TWO = KneserInstance(5, 2)
CFG52 = moment_curve_config(5, 2)
ONE_IN = Coloring.from_function(FIVE_TWO, lambda s: 0 if 1 in s.members else 1)


def exact_ok(w, coloring):
    return (
        not set(w.a.members) & set(w.b.members)
        and coloring.color_of(w.a) == coloring.color_of(w.b) == w.color
    )


def test_first_axis_exposes_pair():
    tables = _ColorTables(CFG52, ONE_IN)
    w, _, _ = tables.scan(np.array([[1.0, 0.0]]), 1e-9)
    assert (w.a, w.b, w.color) == (KSubset.of(2, 3), KSubset.of(4, 5), 1)
    assert w.provenance == "geometric" and w.direction == (1.0, 0.0)


def test_geometric_search_finds_valid_pair():
    w = geometric_witness_search(FIVE_TWO, CFG52, ONE_IN)
    assert w.provenance == "geometric" and exact_ok(w, ONE_IN)
    assert hybrid_witness(FIVE_TWO, CFG52, ONE_IN) == w


def test_proper_coloring_gives_nothing():
    assert geometric_witness_search(FIVE_TWO, CFG52, canonical_coloring(FIVE_TWO)) is None


def test_antipodal_grid_invariance():
    rng = np.random.default_rng(0)
    for seed in range(30):
        inst = KneserInstance(8, 3)
        coloring = random_coloring(inst, 3, seed)
        tables = _ColorTables(moment_curve_config(8, 3), coloring)
        dirs = rng.standard_normal((16, 3))
        flip = np.where(rng.random(16) < 0.5, -1.0, 1.0)[:, None]
        w1, _, _ = tables.scan(dirs, 1e-9)
        w2, _, _ = tables.scan(dirs * flip, 1e-9)
        if w1 is None:
            assert w2 is None
        else:
            assert (w1.a, w1.b, w1.color) == (w2.a, w2.b, w2.color)


def test_grid_is_canonical_and_deduplicated():
    dirs = direction_grid(3, 100, np.random.default_rng(1))
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1)
    assert np.all(dirs[:, 0] > 0)
    assert direction_grid(1, 50, np.random.default_rng(1)).tolist() == [[1.0]]


def test_determinism():
    inst = KneserInstance(9, 3)
    cfg = moment_curve_config(9, 4)
    for seed in range(10):
        coloring = random_coloring(inst, 4, seed)
        params = SearchParams(seed=seed)
        assert geometric_witness_search(inst, cfg, coloring, params) == geometric_witness_search(
            inst, cfg, coloring, params
        )


def test_hybrid_constant_halves():
    inst = KneserInstance(4, 2)
    coloring = Coloring(inst, (0,) * 6)
    w = hybrid_witness(inst, moment_curve_config(4, 1), coloring)
    assert (w.a.members, w.b.members) == ((1, 2), (3, 4))


def test_hybrid_random_two_colorings():
    seen = 0
    for seed in range(200):
        coloring = random_coloring(FIVE_TWO, 2, seed)
        if coloring.num_colors != 2:
            continue
        w = hybrid_witness(FIVE_TWO, CFG52, coloring, SearchParams(seed=seed))
        assert exact_ok(w, coloring) and w.validate(coloring)
        assert verify_coloring(coloring) is not None
        seen += 1
        if seen == 100:
            break
    assert seen == 100


def test_oracle_path_reports_brute(monkeypatch):
    import kneser_geo.witness as witness

    monkeypatch.setattr(witness, "geometric_witness_search", lambda *a, **k: None)
    w = witness.hybrid_witness(FIVE_TWO, CFG52, ONE_IN)
    assert w.provenance == "brute" and w.direction is None


def test_precondition():
    with pytest.raises(PreconditionError):
        hybrid_witness(FIVE_TWO, CFG52, canonical_coloring(FIVE_TWO))


def test_diagnostic_identical_singletons():
    coloring = coloring_from_classes(FIVE_TWO, [[(1, 2)]])
    report = contradiction_diagnostic(FIVE_TWO, CFG52, coloring, (1, 0))
    first = report.per_color[0]
    assert isinstance(first, Interval)
    assert first.contains(report.gamma.offset) or not report.transversal
    left, on, right = report.counts
    assert left + on + right == 5
    assert report.left_below_k == (left < 2) and report.right_below_k == (right < 2)


def test_diagnostic_reports_failures():
    report = contradiction_diagnostic(FIVE_TWO, CFG52, ONE_IN, (1, 0))
    assert isinstance(report.per_color[1], HellyFailure)
    assert not report.transversal


def test_diagnostic_capacity_flag_never_set():
    rng = np.random.default_rng(7)
    for n, k in [(5, 2), (8, 3), (9, 2), (12, 4)]:
        inst = KneserInstance(n, k)
        cfg = moment_curve_config(n, inst.d)
        coloring = canonical_coloring(inst)
        for _ in range(50):
            report = contradiction_diagnostic(inst, cfg, coloring, rng.standard_normal(inst.d))
            assert report.counts[1] <= inst.d
            assert not report.on_at_least_capacity


def test_diagnostic_dimension_one():
    inst = KneserInstance(6, 3)
    report = contradiction_diagnostic(inst, moment_curve_config(6, 1), canonical_coloring(inst), (1,))
    assert report.counts[1] <= 1 and not report.on_at_least_capacity
