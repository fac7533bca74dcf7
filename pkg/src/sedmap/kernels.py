"""Hot numeric kernels: impulse propagation and signed path closure.

Two implementations of each kernel ship side by side: a numba ``@njit``
version and a pure-numpy fallback.  The njit path is used when numba
imports cleanly and the environment variable ``SEDMAP_DISABLE_NUMBA`` is
unset; setting it to ``1`` (or ``true``/``yes``) forces the numpy path.
``benchmarks/bench_kernels.py`` times the two against each other.

Both paths implement identical math; floating-point results may differ in
the last bits because summation order differs.
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "SEDMAP_DISABLE_NUMBA"


def _numba_wanted() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in ("1", "true", "yes")


def propagate_numpy(
    weights: np.ndarray,
    y_base: np.ndarray,
    injections: np.ndarray,
    clamp: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """Run the additive impulse recurrence with per-step matvec in numpy.

    ``injections`` is dense (horizon+1, n); row t is the external impulse
    added at step t.  Returns (ys, os), each (horizon+1, n).
    """
    steps, n = injections.shape
    ys = np.empty((steps, n))
    os_ = np.empty((steps, n))
    wt = np.ascontiguousarray(weights.T)
    o = injections[0].copy()
    y = y_base + o
    if clamp:
        np.clip(y, 0.0, 1.0, out=y)
    ys[0] = y
    os_[0] = o
    for t in range(1, steps):
        o = wt @ o + injections[t]
        y = y + o
        if clamp:
            np.clip(y, 0.0, 1.0, out=y)
        ys[t] = y
        os_[t] = o
    return ys, os_


def _propagate_loops(weights, y_base, injections, clamp):
    steps, n = injections.shape
    ys = np.empty((steps, n))
    os_ = np.empty((steps, n))
    o = injections[0].copy()
    for j in range(n):
        v = y_base[j] + o[j]
        if clamp:
            v = min(max(v, 0.0), 1.0)
        ys[0, j] = v
        os_[0, j] = o[j]
    o_next = np.empty(n)
    for t in range(1, steps):
        for j in range(n):
            acc = 0.0
            for i in range(n):
                acc += weights[i, j] * o[i]
            o_next[j] = acc + injections[t, j]
        for j in range(n):
            v = ys[t - 1, j] + o_next[j]
            if clamp:
                v = min(max(v, 0.0), 1.0)
            ys[t, j] = v
            os_[t, j] = o_next[j]
        o, o_next = o_next, o
    return ys, os_


def closure_numpy(weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Best positive / negative simple-path products between all node pairs.

    Depth-first search over simple directed paths from each start node,
    tracking the running product.  Diagonal entries record simple cycles
    through the node (a path that returns to its start).  Pure python loop
    over a numpy weight matrix; the njit twin is the fast path.
    """
    return _closure_loops(weights)


def _closure_loops(weights):
    n = weights.shape[0]
    vplus = np.zeros((n, n))
    vminus = np.zeros((n, n))
    nodes = np.empty(n + 1, np.int64)
    cursor = np.empty(n + 1, np.int64)
    prod = np.empty(n + 1, np.float64)
    visited = np.zeros(n, np.bool_)
    for start in range(n):
        for k in range(n):
            visited[k] = False
        depth = 0
        nodes[0] = start
        cursor[0] = 0
        prod[0] = 1.0
        while depth >= 0:
            u = nodes[depth]
            j = cursor[depth]
            if j >= n:
                depth -= 1
                if depth >= 0:
                    visited[u] = False
                continue
            cursor[depth] = j + 1
            w = weights[u, j]
            if w == 0.0:
                continue
            p = prod[depth] * w
            if j == start:
                # simple cycle closed; record on the diagonal, do not extend
                if p > 0.0:
                    if p > vplus[start, start]:
                        vplus[start, start] = p
                else:
                    if -p > vminus[start, start]:
                        vminus[start, start] = -p
                continue
            if visited[j]:
                continue
            if p > 0.0:
                if p > vplus[start, j]:
                    vplus[start, j] = p
            else:
                if -p > vminus[start, j]:
                    vminus[start, j] = -p
            depth += 1
            nodes[depth] = j
            cursor[depth] = 0
            prod[depth] = p
            visited[j] = True
    return vplus, vminus


NUMBA_ENABLED = False
propagate_numba = None
closure_numba = None

if _numba_wanted():
    try:
        from numba import njit

        propagate_numba = njit(cache=True)(_propagate_loops)
        closure_numba = njit(cache=True)(_closure_loops)
        NUMBA_ENABLED = True
    except ImportError:
        pass

if NUMBA_ENABLED:
    propagate = propagate_numba
    closure = closure_numba
else:
    propagate = propagate_numpy
    closure = closure_numpy
