"""Impulse-process simulation on cognitive maps.

State vectors Y(t) and impulse (momentum) vectors O(t) are plain float
arrays aligned with map factor order.  One step propagates impulses along
edge direction,

    O'[j] = sum_i W[i, j] * O[i],

and accumulates state additively, Y(t+1) = Y(t) + O(t+1).  The model is
linear; nothing bounds Y unless clamping to [0, 1] is explicitly requested,
in which case each Y coordinate is clipped after the additive update while
the O series is left untouched.  Divergence under an unstable weight
structure is reported as-is, never suppressed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import kernels
from .mapcore import CognitiveMap, UnknownFactorError


def vector_from_named(m: CognitiveMap, values: Mapping[str, float]) -> np.ndarray:
    """Dense vector in factor order from a {factor id: value} mapping."""
    out = np.zeros(m.n)
    for fid, v in values.items():
        if fid not in m.index:
            raise UnknownFactorError(fid)
        out[m.index[fid]] = float(v)
    return out


def _check_aligned(m: CognitiveMap, vec: np.ndarray, what: str) -> np.ndarray:
    arr = np.asarray(vec, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != m.n:
        raise ValueError(f"{what} has length {arr.shape}, map has {m.n} factors")
    return arr


@dataclass(frozen=True)
class ImpulseSchedule:
    """External injections keyed by step index; missing steps inject zero."""

    entries: Mapping[int, np.ndarray] = field(default_factory=dict)

    @classmethod
    def initial(cls, m: CognitiveMap, values: Mapping[str, float]) -> "ImpulseSchedule":
        return cls({0: vector_from_named(m, values)})

    @classmethod
    def from_named(cls, m: CognitiveMap, named: Mapping[int, Mapping[str, float]]) -> "ImpulseSchedule":
        return cls({int(t): vector_from_named(m, vals) for t, vals in named.items()})

    def dense(self, m: CognitiveMap, horizon: int) -> np.ndarray:
        """(horizon+1, n) injection matrix; validates indices and alignment."""
        inj = np.zeros((horizon + 1, m.n))
        for t, vec in self.entries.items():
            if not isinstance(t, (int, np.integer)) or t < 0:
                raise ValueError(f"schedule step {t!r} is not a non-negative integer")
            if t > horizon:
                raise ValueError(f"schedule step {t} exceeds horizon {horizon}")
            inj[t] = _check_aligned(m, vec, f"schedule entry at step {t}")
        return inj

    def scaled(self, a: float) -> "ImpulseSchedule":
        return ImpulseSchedule({t: a * np.asarray(v, dtype=float) for t, v in self.entries.items()})


EMPTY_SCHEDULE = ImpulseSchedule({})


@dataclass(frozen=True)
class Trajectory:
    """Y and O series over t = 0..horizon, rows in factor order."""

    factor_ids: tuple[str, ...]
    ys: np.ndarray   # (horizon+1, n)
    os_: np.ndarray  # (horizon+1, n)

    @property
    def horizon(self) -> int:
        return self.ys.shape[0] - 1

    def y(self, t: int) -> np.ndarray:
        return self.ys[t]

    def series(self, factor_id: str) -> np.ndarray:
        return self.ys[:, self.factor_ids.index(factor_id)]


def impulse_step(m: CognitiveMap, o: np.ndarray) -> np.ndarray:
    """One propagation step: O'[j] = sum_i W[i, j] * O[i]."""
    o = _check_aligned(m, o, "impulse vector")
    return m.weights().T @ o


def simulate(
    m: CognitiveMap,
    y_base: np.ndarray,
    schedule: ImpulseSchedule,
    horizon: int,
    clamp: bool = False,
) -> Trajectory:
    """Run the impulse recurrence for ``horizon`` steps.

    O(0) is the schedule's step-0 injection (zero if absent) and
    Y(0) = Y_base + O(0), so the additive update law holds uniformly from
    the first row.  Later steps add scheduled injections after propagation:
    O(t+1) = step(O(t)) + schedule(t+1).
    """
    if horizon < 0:
        raise ValueError(f"negative horizon {horizon}")
    y0 = _check_aligned(m, y_base, "base state")
    inj = schedule.dense(m, horizon)
    w = np.ascontiguousarray(m.weights())
    ys, os_ = kernels.propagate(w, y0, inj, clamp)
    return Trajectory(m.factor_ids, ys, os_)


def closed_form_state(m: CognitiveMap, o0: np.ndarray, horizon: int) -> np.ndarray:
    """Y(T) - Y_base for a single initial impulse, by powers of the operator.

    Evaluates sum_{t=0..T} M^t O0 with M the propagation operator, i.e. the
    geometric-series form of the same recurrence simulate unrolls step by
    step.  No clamping.  Serves as the analytic cross-check for simulate.
    """
    if horizon < 0:
        raise ValueError(f"negative horizon {horizon}")
    o0 = _check_aligned(m, o0, "initial impulse")
    mat = m.weights().T
    term = o0.copy()
    total = o0.copy()
    for _ in range(horizon):
        term = mat @ term
        total += term
    return total
