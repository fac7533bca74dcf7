import math

import numpy as np
import pytest

from genmaps import map_from_matrix, random_matrix, random_map, stable_map, unstable_map
from oracles import closure_by_enumeration, influence_by_formula

from sedmap.analysis import (
    ClosurePair,
    apply_plan,
    influence_report,
    stability_report,
    stabilize_search,
    transitive_closure,
)
from sedmap.dynamics import ImpulseSchedule, simulate
from sedmap.mapcore import Factor, MapError, WeightedEdge, build_map

TWO_CYCLE_RHO = math.sqrt(0.72)  # analytic eigenvalues of the 2-cycle are +/- sqrt(w1*w2)


@pytest.fixture
def triangle():
    return build_map(
        [Factor("a"), Factor("b"), Factor("c")],
        [WeightedEdge("a", "b", 0.5), WeightedEdge("b", "c", -0.6), WeightedEdge("a", "c", 0.8)],
    )


# --- closure -------------------------------------------------------------

def test_closure_triangle_example(triangle):
    cl = transitive_closure(triangle)
    i, k = 0, 2
    # direct path 0.8 positive; a->b->c gives 0.5 * -0.6 = -0.3
    assert cl.v_plus[i, k] == 0.8
    assert cl.v_minus[i, k] == pytest.approx(0.3, abs=1e-15)
    vp, vm = closure_by_enumeration(triangle)
    assert np.array_equal(cl.v_plus, vp)
    assert np.array_equal(cl.v_minus, vm)


def test_closure_single_negative_edge():
    m = build_map([Factor("a"), Factor("b")], [WeightedEdge("a", "b", -0.4)])
    cl = transitive_closure(m)
    assert cl.v_plus[0, 1] == 0.0
    assert cl.v_minus[0, 1] == 0.4


def test_closure_edgeless(edgeless):
    cl = transitive_closure(edgeless)
    assert not cl.v_plus.any() and not cl.v_minus.any()


def test_closure_diagonal_records_cycles(two_cycle):
    cl = transitive_closure(two_cycle)
    assert cl.v_plus[0, 0] == pytest.approx(0.72, abs=1e-15)
    assert cl.v_plus[1, 1] == pytest.approx(0.72, abs=1e-15)


def test_closure_matches_enumeration_on_random_maps(rng):
    for _ in range(60):
        m = random_map(rng, n_max=6, density=0.45)
        cl = transitive_closure(m)
        vp, vm = closure_by_enumeration(m)
        assert np.array_equal(cl.v_plus, vp)
        assert np.array_equal(cl.v_minus, vm)


def test_closure_monotone_in_positive_weights(rng):
    for _ in range(25):
        w = random_matrix(rng, int(rng.integers(2, 6)), density=0.5)
        positives = np.argwhere(w > 0)
        if len(positives) == 0:
            continue
        i, j = positives[int(rng.integers(len(positives)))]
        before = transitive_closure(map_from_matrix(w))
        w2 = w.copy()
        w2[i, j] = min(1.0, w2[i, j] + float(rng.uniform(0, 1.0 - w2[i, j] + 1e-12)))
        after = transitive_closure(map_from_matrix(w2))
        assert (after.v_plus >= before.v_plus - 1e-15).all()


# --- influence -----------------------------------------------------------

def test_influence_worked_example(triangle):
    cl = transitive_closure(triangle)
    rep = influence_report(cl, triangle.factor_ids)
    assert rep.influence[0, 2] == pytest.approx(0.8, abs=1e-15)
    assert rep.consonance[0, 2] == pytest.approx(0.5 / 1.1, abs=1e-15)
    assert rep.dissonance[0, 2] == pytest.approx(1 - 0.5 / 1.1, abs=1e-15)


def test_influence_fully_consonant_when_one_sided():
    cl = ClosurePair(np.array([[0.0, 0.7], [0.0, 0.0]]), np.zeros((2, 2)))
    rep = influence_report(cl)
    assert rep.influence[0, 1] == 0.7
    assert rep.consonance[0, 1] == 1.0


def test_influence_balanced_conflict_is_maximally_dissonant():
    cl = ClosurePair(np.full((1, 1), 0.5), np.full((1, 1), 0.5))
    rep = influence_report(cl)
    assert rep.influence[0, 0] == 0.0  # sign(0) = 0
    assert rep.consonance[0, 0] == 0.0
    assert rep.dissonance[0, 0] == 1.0


def test_influence_matches_independent_formulas(rng):
    for _ in range(40):
        m = random_map(rng, n_max=6, density=0.5)
        cl = transitive_closure(m)
        rep = influence_report(cl, m.factor_ids)
        p, c = influence_by_formula(cl.v_plus, cl.v_minus)
        assert np.allclose(rep.influence, p, atol=0, rtol=0)
        assert np.allclose(rep.consonance, c, atol=0, rtol=0)
        # ranges
        assert (rep.consonance >= 0).all() and (rep.consonance <= 1).all()
        assert np.array_equal(rep.dissonance, 1.0 - rep.consonance)
        assert (np.abs(rep.influence) <= 1).all()
        # aggregates are plain row/column means
        assert np.allclose(rep.influence_on_system, rep.influence.mean(axis=1))
        assert np.allclose(rep.susceptibility, rep.influence.mean(axis=0))
        assert np.allclose(rep.consonance_on_system, rep.consonance.mean(axis=1))


def test_influence_shape_mismatch():
    with pytest.raises(ValueError, match="shape"):
        influence_report(ClosurePair(np.zeros((2, 2)), np.zeros((3, 3))))


# --- stability -----------------------------------------------------------

def test_stability_edgeless(edgeless):
    rep = stability_report(edgeless, 1e-6)
    assert rep.spectral_radius == 0.0
    assert rep.classification == "stable"


def test_stability_two_cycle(two_cycle):
    rep = stability_report(two_cycle, 1e-6)
    assert rep.spectral_radius == pytest.approx(TWO_CYCLE_RHO, abs=1e-6)
    assert rep.classification == "stable"


def test_stability_unit_self_loop(self_loop):
    rep = stability_report(self_loop, 1e-6)
    assert rep.spectral_radius == pytest.approx(1.0, abs=1e-9)
    assert rep.classification == "marginal"


def test_stability_bad_tolerance(chain):
    with pytest.raises(ValueError, match="positive"):
        stability_report(chain, 0.0)


def test_stability_matches_eigenvalues(rng):
    for _ in range(40):
        m = random_map(rng, n_max=8)
        rho_eig = float(np.abs(np.linalg.eigvals(m.weights())).max())
        rep = stability_report(m, 1e-6)
        assert rep.spectral_radius == pytest.approx(rho_eig, abs=1e-5, rel=1e-5)


def decay_bound(m, tol=1e-6, threshold=1e-6):
    """Steps until a unit impulse provably shrinks under the threshold.

    Doubles k until ||M^k||^(1/k) < 1 - tol, then returns q*k with
    est^(q*k) < threshold.
    """
    mat = m.weights().T
    k = 1
    power = mat.copy()
    for _ in range(60):
        norm = np.linalg.norm(power, 2)
        if norm == 0.0:
            return k  # nilpotent: gone after k steps
        est = norm ** (1.0 / k)
        if est < 1.0 - tol:
            q = math.floor(math.log(threshold) / (k * math.log(est))) + 1
            return k * max(q, 1)
        power = power @ power
        k *= 2
    raise AssertionError("no decay bound found for a reported-stable map")


def test_reported_stable_maps_decay_within_bound(rng):
    for _ in range(20):
        m = stable_map(rng, n_max=8)
        rep = stability_report(m, 1e-6)
        assert rep.classification == "stable"
        bound = decay_bound(m)
        mat = m.weights().T
        powers = np.eye(m.n)
        for _ in range(bound):
            powers = mat @ powers
        # columns of M^t are the O(t) of unit impulses
        assert np.abs(powers).max() < 1e-6


def test_reported_unstable_maps_grow(rng):
    for _ in range(20):
        m = unstable_map(rng, n_max=6)
        rep = stability_report(m, 1e-6)
        assert rep.classification == "unstable"
        mat = m.weights().T
        powers = np.eye(m.n)
        grew = False
        for _ in range(200):
            powers = mat @ powers
            if np.abs(powers).max() > 1.0:
                grew = True
                break
        assert grew


# --- stabilization -------------------------------------------------------

def test_stabilize_unit_self_loop(self_loop):
    plan = stabilize_search(self_loop, frozenset(), 1e-6)
    assert plan.succeeded
    assert len(plan.changes) == 1
    change = plan.changes[0]
    assert (change.source, change.target) == ("a", "a")
    assert change.old_weight == 1.0 and change.new_weight == 0.5
    assert plan.resulting_radius == pytest.approx(0.5, abs=1e-9)


def test_stabilize_already_stable_is_noop(chain):
    plan = stabilize_search(chain, frozenset(), 1e-6)
    assert plan.succeeded and plan.changes == ()


def test_stabilize_all_edges_locked():
    m = build_map([Factor("a"), Factor("b")],
                  [WeightedEdge("a", "b", 1.0), WeightedEdge("b", "a", 1.0)])
    locked = frozenset({("a", "b"), ("b", "a")})
    with pytest.raises(MapError, match="locked"):
        stabilize_search(m, locked, 1e-6)


def test_stabilize_unknown_locked_edge(chain):
    with pytest.raises(MapError, match="not in map"):
        stabilize_search(chain, frozenset({("q", "p")}), 1e-6)


def test_stabilize_respects_locks():
    m = build_map([Factor("a"), Factor("b")],
                  [WeightedEdge("a", "b", 1.0), WeightedEdge("b", "a", 1.0)])
    plan = stabilize_search(m, frozenset({("a", "b")}), 1e-6)
    assert plan.succeeded
    assert all((c.source, c.target) == ("b", "a") for c in plan.changes)


def test_stabilize_replay_yields_stable_map(rng):
    for _ in range(25):
        m = unstable_map(rng, n_max=5)
        plan = stabilize_search(m, frozenset(), 1e-6)
        if not plan.succeeded:
            continue
        fixed = apply_plan(m, plan)
        assert stability_report(fixed, 1e-6).classification == "stable"
        # plan weights hold the invariant
        assert all(-1.0 <= c.new_weight <= 1.0 for c in plan.changes)


def test_stabilized_map_impulses_die_out(rng):
    m = unstable_map(rng, n_max=5)
    plan = stabilize_search(m, frozenset(), 1e-6)
    assert plan.succeeded
    fixed = apply_plan(m, plan)
    o0 = np.ones(m.n)
    traj = simulate(fixed, np.zeros(m.n), ImpulseSchedule({0: o0}), 400)
    assert np.abs(traj.os_[-1]).max() < np.abs(traj.os_[0]).max()
