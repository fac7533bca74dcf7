"""What-if scenarios against a target factor.

A scenario is a named impulse schedule restricted to control factors; its
outcome is the change it produces in the target factor over the horizon.
Because the unclamped dynamics are linear, the map from an initial impulse
to the target outcome is a dot product with a gain vector, which makes the
inverse problem ("which impulse reaches the desired change?") ordinary
least squares with an optional ridge term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import EMPTY_SCHEDULE, ImpulseSchedule, Trajectory, simulate
from .mapcore import CognitiveMap, FactorKind, UnknownFactorError

ZERO_GAIN = 1e-12  # gains below this count as no influence at all


class ScenarioError(ValueError):
    """Scenario definition is inconsistent with the map."""


class UnreachableTargetError(ScenarioError):
    """No control impulse moves the target; the desired change cannot be met."""


@dataclass(frozen=True)
class Scenario:
    name: str
    control_factors: tuple[str, ...]
    schedule: ImpulseSchedule
    horizon: int
    clamp: bool = False


@dataclass(frozen=True)
class TargetSpec:
    target: str
    desired_delta: float
    horizon: int


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    trajectory: Trajectory
    target_delta: float
    final_deltas: np.ndarray  # Y(T) - Y_base per factor


@dataclass(frozen=True)
class RankedScenario:
    name: str
    target_delta: float
    distance: float


def _require_target(m: CognitiveMap) -> str:
    t = m.target_factor()
    if t is None:
        raise ScenarioError("map has no target factor")
    return t.id


def _check_scenario(m: CognitiveMap, scenario: Scenario) -> None:
    controls = set()
    for fid in scenario.control_factors:
        f = m.factor(fid)  # raises UnknownFactorError
        if f.kind != FactorKind.CONTROL:
            raise ScenarioError(f"factor {fid!r} has kind {f.kind.value}, not control")
        controls.add(fid)
    if scenario.horizon < 1:
        raise ScenarioError(f"scenario horizon must be >= 1, got {scenario.horizon}")
    for t, vec in scenario.schedule.entries.items():
        arr = np.asarray(vec, dtype=float)
        for i in np.nonzero(arr)[0]:
            fid = m.factor_ids[int(i)]
            if fid not in controls:
                raise ScenarioError(
                    f"schedule at step {t} touches non-control factor {fid!r}"
                )


def run_scenario(m: CognitiveMap, y_base: np.ndarray, scenario: Scenario) -> ScenarioResult:
    """Simulate a scenario; the target delta excludes the base state.

    target_delta is Y_target(T) minus the target's base value, i.e. the full
    effect of the scenario including its own initial impulse.
    """
    target = _require_target(m)
    _check_scenario(m, scenario)
    traj = simulate(m, y_base, scenario.schedule, scenario.horizon, scenario.clamp)
    y_base = np.asarray(y_base, dtype=float)
    final = traj.ys[-1] - y_base
    return ScenarioResult(
        name=scenario.name,
        trajectory=traj,
        target_delta=float(final[m.index[target]]),
        final_deltas=final,
    )


def compare_scenarios(
    m: CognitiveMap,
    y_base: np.ndarray,
    scenarios: list[Scenario],
    spec: TargetSpec,
) -> list[RankedScenario]:
    """Rank scenarios by closeness to the desired target change.

    Ascending by |target_delta - desired|; ties fall to lexicographic name
    order, so the ranking is deterministic and input-order independent.
    """
    for s in scenarios:
        if s.horizon != spec.horizon:
            raise ScenarioError(
                f"scenario {s.name!r} horizon {s.horizon} != target horizon {spec.horizon}"
            )
    ranked = []
    for s in scenarios:
        delta = run_scenario(m, y_base, s).target_delta
        ranked.append(RankedScenario(s.name, delta, abs(delta - spec.desired_delta)))
    ranked.sort(key=lambda r: (r.distance, r.name))
    return ranked


def sensitivity(m: CognitiveMap, spec: TargetSpec) -> np.ndarray:
    """d Y_target(T) / d O_i(0) for each factor i; exact for the linear model.

    This is the target's row of sum_{t=0..T} M^t.  At T = 0 it degenerates
    to the target's indicator vector.
    """
    if spec.target not in m.index:
        raise UnknownFactorError(spec.target)
    mat = m.weights().T
    n = m.n
    row = np.zeros(n)
    row[m.index[spec.target]] = 1.0
    # accumulate row * sum M^t by propagating the row through M
    total = row.copy()
    term = row.copy()
    for _ in range(spec.horizon):
        term = term @ mat
        total += term
    return total


def invert_scenario(
    m: CognitiveMap,
    y_base: np.ndarray,
    control_factors: tuple[str, ...],
    spec: TargetSpec,
    ridge: float = 0.0,
) -> np.ndarray:
    """Single initial impulse on the controls that best reaches the target.

    Minimizes (achieved_delta - desired_delta)^2 + ridge * ||o||^2 over
    impulses supported on the control factors.  The achieved delta is
    linear in o with coefficients given by :func:`sensitivity`, so the
    optimum is closed-form; with ridge = 0 and several controls the
    minimum-norm solution is returned.  Raises UnreachableTargetError when
    every control gain is zero but a nonzero change is desired.
    """
    if ridge < 0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    if not control_factors:
        raise ScenarioError("no control factors given")
    target = _require_target(m)
    if spec.target != target:
        raise ScenarioError(f"target {spec.target!r} is not the map's target factor {target!r}")
    for fid in control_factors:
        f = m.factor(fid)
        if f.kind != FactorKind.CONTROL:
            raise ScenarioError(f"factor {fid!r} has kind {f.kind.value}, not control")

    gains_all = sensitivity(m, spec)
    idx = [m.index[fid] for fid in control_factors]
    gains = gains_all[idx]
    if np.max(np.abs(gains)) < ZERO_GAIN:
        if spec.desired_delta != 0.0:
            raise UnreachableTargetError(
                f"controls {control_factors!r} have no influence on {spec.target!r}"
            )
        return np.zeros(m.n)
    denom = float(gains @ gains) + ridge
    coeffs = gains * (spec.desired_delta / denom)
    impulse = np.zeros(m.n)
    impulse[idx] = coeffs
    return impulse
