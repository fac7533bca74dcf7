"""Static analysis of a cognitive map.

Three layers:

* transitive closure — for every ordered factor pair, the strongest
  positive and strongest negative influence transmitted along simple
  directed paths (simple cycles for a factor onto itself);
* influence / consonance / dissonance indicators derived from the closure,
  with per-factor system aggregates;
* stability — the spectral radius of the impulse propagation operator,
  estimated by Gelfand's norm-power iteration, plus a greedy search for
  edge-weight reductions that restore stability.

Impulses injected into the map decay to zero over time exactly when the
spectral radius is below one; that is the sustainability reading used by
the classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .mapcore import CognitiveMap, MapError, WeightedEdge, build_map

STABLE = "stable"
MARGINAL = "marginal"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class ClosurePair:
    """Strongest positive (v_plus) and negative (v_minus) path influences.

    Both matrices are elementwise in [0, 1]; v_minus stores magnitudes.
    """

    v_plus: np.ndarray
    v_minus: np.ndarray


@dataclass(frozen=True)
class InfluenceReport:
    factor_ids: tuple[str, ...]
    influence: np.ndarray    # P, signed, in [-1, 1]
    consonance: np.ndarray   # C, in [0, 1]
    dissonance: np.ndarray   # D = 1 - C
    influence_on_system: np.ndarray      # row means of P
    susceptibility: np.ndarray           # column means of P
    consonance_on_system: np.ndarray     # row means of C


@dataclass(frozen=True)
class StabilityReport:
    spectral_radius: float
    classification: str
    tol: float


@dataclass(frozen=True)
class EdgeChange:
    source: str
    target: str
    old_weight: float
    new_weight: float


@dataclass(frozen=True)
class StabilizationPlan:
    changes: tuple[EdgeChange, ...]
    resulting_radius: float
    succeeded: bool


def transitive_closure(m: CognitiveMap) -> ClosurePair:
    """Best positive / negative simple-path influence between all pairs.

    A path's influence is the product of its edge weights; the closure
    keeps, per ordered pair, the maximal positive product and the maximal
    magnitude among negative products.  With |w| <= 1 revisiting a vertex
    can never increase a product's magnitude, so simple paths suffice.
    """
    vplus, vminus = kernels.closure(np.ascontiguousarray(m.weights()))
    return ClosurePair(vplus, vminus)


def influence_report(closure: ClosurePair, factor_ids: tuple[str, ...] = ()) -> InfluenceReport:
    """Silov-style indicators from a closure pair.

    P[i][j] = sign(V+ - V-) * max(V+, V-); C[i][j] = |V+ - V-| / (V+ + V-)
    with the no-influence case 0/0 read as full consonance (C = 1), and
    D = 1 - C.  Per-factor aggregates are row/column means: how strongly a
    factor drives the system, how strongly the system drives it, and how
    consistently signed its outgoing influence is.
    """
    vp, vm = closure.v_plus, closure.v_minus
    if vp.shape != vm.shape or vp.ndim != 2 or vp.shape[0] != vp.shape[1]:
        raise ValueError(f"closure matrices have mismatched shapes {vp.shape} vs {vm.shape}")
    n = vp.shape[0]
    if factor_ids and len(factor_ids) != n:
        raise ValueError(f"{len(factor_ids)} factor ids for {n}x{n} closure")
    p = np.sign(vp - vm) * np.maximum(vp, vm)
    total = vp + vm
    safe_total = np.where(total > 0.0, total, 1.0)
    c = np.where(total > 0.0, np.abs(vp - vm) / safe_total, 1.0)
    d = 1.0 - c
    ids = factor_ids or tuple(str(i) for i in range(n))
    return InfluenceReport(
        factor_ids=tuple(ids),
        influence=p,
        consonance=c,
        dissonance=d,
        influence_on_system=p.mean(axis=1),
        susceptibility=p.mean(axis=0),
        consonance_on_system=c.mean(axis=1),
    )


def analyze_map(m: CognitiveMap, tol: float = 1e-6) -> tuple[ClosurePair, InfluenceReport, StabilityReport]:
    """Closure, influence indicators, and stability in one call."""
    closure = transitive_closure(m)
    return closure, influence_report(closure, m.factor_ids), stability_report(m, tol)


def _gelfand_radius(mat: np.ndarray, tol: float, max_doublings: int = 60) -> float:
    """Spectral radius via ||M^k||_2^(1/k) with k doubling.

    The estimate is non-increasing in k and bounded below by the true
    radius; iteration stops when the relative change between successive
    doublings falls under tol/2, or at the doubling cap.  Powers are kept
    normalized with the log-scale carried separately so neither growth nor
    decay overflows.
    """
    norm = float(np.linalg.norm(mat, 2))
    if norm == 0.0:
        return 0.0
    power = mat / norm
    log_norm = math.log(norm)  # log ||M^k||, k below
    k = 1
    est = norm
    for _ in range(max_doublings):
        squared = power @ power
        step_norm = float(np.linalg.norm(squared, 2))
        if step_norm == 0.0:
            return 0.0  # nilpotent
        k *= 2
        log_norm = 2.0 * log_norm + math.log(step_norm)
        power = squared / step_norm
        new_est = math.exp(log_norm / k)
        if abs(new_est - est) <= (tol / 2.0) * max(new_est, 1e-300):
            return new_est
        est = new_est
    return est


def stability_report(m: CognitiveMap, tol: float = 1e-6) -> StabilityReport:
    """Estimate the propagation operator's spectral radius and classify.

    stable when rho < 1 - tol, unstable when rho > 1 + tol, marginal in the
    band between.  Marginal dynamics are reported, not promoted to stable.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    rho = _gelfand_radius(m.weights().T, tol)
    if rho < 1.0 - tol:
        cls = STABLE
    elif rho > 1.0 + tol:
        cls = UNSTABLE
    else:
        cls = MARGINAL
    return StabilityReport(rho, cls, tol)


def apply_plan(m: CognitiveMap, plan: StabilizationPlan) -> CognitiveMap:
    """Replay a stabilization plan's edge changes onto a map."""
    weights = {(e.source, e.target): e.weight for e in m.edges}
    for ch in plan.changes:
        weights[(ch.source, ch.target)] = ch.new_weight
    edges = [WeightedEdge(s, t, w) for (s, t), w in weights.items()]
    return build_map(m.factors, edges, m.metadata)


def stabilize_search(
    m: CognitiveMap,
    locked_edges: frozenset[tuple[str, str]] = frozenset(),
    tol: float = 1e-6,
) -> StabilizationPlan:
    """Greedy search for weight halvings that bring the radius under one.

    Each move scales one unlocked edge's weight by 0.5 (sign kept, magnitude
    floored at zero).  The move that most reduces the radius is applied,
    repeatedly, until the map classifies stable or no move helps; ties fall
    to the earliest edge in map order, so plans are deterministic.  An
    already-stable map yields an empty successful plan.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    edge_keys = {(e.source, e.target) for e in m.edges}
    for key in locked_edges:
        if key not in edge_keys:
            raise MapError(f"locked edge {key[0]!r}->{key[1]!r} not in map")

    weights = {(e.source, e.target): e.weight for e in m.edges}
    order = [(e.source, e.target) for e in m.edges]

    def radius(wmap) -> float:
        idx = m.index
        mat = np.zeros((m.n, m.n))
        for (s, t), w in wmap.items():
            mat[idx[s], idx[t]] = w
        return _gelfand_radius(mat.T, tol)

    rho = radius(weights)
    if rho >= 1.0 and all(key in locked_edges for key in order):
        raise MapError("all edges locked while the map is not stable")

    changes: list[EdgeChange] = []
    while rho >= 1.0 - tol:
        best = None
        for key in order:
            if key in locked_edges or weights[key] == 0.0:
                continue
            trial = dict(weights)
            trial[key] = weights[key] * 0.5
            trial_rho = radius(trial)
            if best is None or trial_rho < best[1]:
                best = (key, trial_rho)
        if best is None or best[1] >= rho:
            break  # exhausted: no move reduces the radius
        key, rho = best
        old = weights[key]
        weights[key] = old * 0.5
        changes.append(EdgeChange(key[0], key[1], old, weights[key]))
    return StabilizationPlan(tuple(changes), rho, rho < 1.0 - tol)
