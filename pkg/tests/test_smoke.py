"""Desk-scale smoke runs: bigger, sparse maps through the whole pipeline."""

import time

import numpy as np
import pytest

from genmaps import map_from_matrix

from sedmap import formats
from sedmap.analysis import analyze_map, stability_report, transitive_closure
from sedmap.dynamics import ImpulseSchedule, simulate
from sedmap.mapcore import Factor, WeightedEdge, build_map


def sparse_map(n=50, per_row=2, seed=9):
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n))
    for i in range(n):
        cols = rng.choice(n, size=per_row, replace=False)
        w[i, cols] = np.round(rng.uniform(-0.9, 0.9, per_row), 6)
    return map_from_matrix(w)


def test_full_pipeline_on_sparse_50_factor_map():
    m = sparse_map()
    start = time.perf_counter()

    closure, infl, stab = analyze_map(m, 1e-6)
    assert closure.v_plus.shape == (50, 50)
    assert (infl.consonance >= 0).all() and (infl.consonance <= 1).all()
    assert stab.classification in ("stable", "marginal", "unstable")

    sched = ImpulseSchedule({0: np.ones(m.n)})
    traj = simulate(m, np.zeros(m.n), sched, 100)
    assert traj.ys.shape == (101, 50)

    data = formats.save_map(m)
    assert formats.save_map(formats.load_map(data)) == data
    exported = formats.export_trajectory(traj)
    assert exported.decode().count("\r\n") == 102  # header + 101 rows

    elapsed = time.perf_counter() - start
    assert elapsed < 20.0, f"smoke pipeline took {elapsed:.1f}s"


def test_closure_scales_to_moderately_dense_mid_size():
    m = sparse_map(n=24, per_row=3, seed=4)
    start = time.perf_counter()
    pair = transitive_closure(m)
    elapsed = time.perf_counter() - start
    assert pair.v_plus.max() <= 1.0
    assert elapsed < 20.0


def test_marginal_band_is_not_promoted_to_stable():
    # rho inside (1 - tol, 1): reported marginal, not stable
    w = 1.0 - 5e-7
    m = build_map([Factor("a")], [WeightedEdge("a", "a", w)])
    rep = stability_report(m, 1e-6)
    assert rep.classification == "marginal"
    assert rep.spectral_radius == pytest.approx(w, abs=1e-9)


def test_strongly_expansive_map_classified_unstable():
    m = build_map(
        [Factor("a"), Factor("b")],
        [
            WeightedEdge("a", "a", 1.0),
            WeightedEdge("a", "b", 1.0),
            WeightedEdge("b", "a", 1.0),
            WeightedEdge("b", "b", 1.0),
        ],
    )
    rep = stability_report(m, 1e-6)
    assert rep.classification == "unstable"
    assert rep.spectral_radius == pytest.approx(2.0, abs=1e-6)
