import subprocess
import sys

import numpy as np
import pytest

from genmaps import random_matrix

from sedmap import kernels


def test_numpy_and_numba_propagate_agree(rng):
    if not kernels.NUMBA_ENABLED:
        pytest.skip("numba disabled in this environment")
    for _ in range(20):
        n = int(rng.integers(1, 9))
        w = random_matrix(rng, n)
        y0 = rng.uniform(0, 1, n)
        horizon = int(rng.integers(0, 25))
        inj = np.zeros((horizon + 1, n))
        inj[0] = rng.uniform(-1, 1, n)
        if horizon > 2:
            inj[2] = rng.uniform(-1, 1, n)
        for clamp in (False, True):
            ys_a, os_a = kernels.propagate_numba(w, y0, inj, clamp)
            ys_b, os_b = kernels.propagate_numpy(w, y0, inj, clamp)
            scale = max(1.0, np.abs(ys_b).max())
            assert np.abs(ys_a - ys_b).max() <= 1e-9 * scale
            assert np.abs(os_a - os_b).max() <= 1e-9 * scale


def test_numpy_and_numba_closure_identical(rng):
    if not kernels.NUMBA_ENABLED:
        pytest.skip("numba disabled in this environment")
    for _ in range(20):
        n = int(rng.integers(1, 7))
        w = random_matrix(rng, n, density=0.5)
        vp_a, vm_a = kernels.closure_numba(w)
        vp_b, vm_b = kernels.closure_numpy(w)
        # identical DFS order and float ops: results match bit for bit
        assert np.array_equal(vp_a, vp_b)
        assert np.array_equal(vm_a, vm_b)


def test_env_flag_disables_numba():
    code = "import sedmap.kernels as k; print(k.NUMBA_ENABLED, k.propagate is k.propagate_numpy)"
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "SEDMAP_DISABLE_NUMBA": "1"},
        check=True,
    )
    assert out.stdout.strip() == "False True"


def test_propagate_zero_horizon(rng):
    w = random_matrix(rng, 3)
    inj = rng.uniform(-1, 1, (1, 3))
    ys, os_ = kernels.propagate(w, np.zeros(3), inj, False)
    assert np.array_equal(os_[0], inj[0])
    assert np.array_equal(ys[0], inj[0])


def test_closure_empty_matrix():
    vp, vm = kernels.closure(np.zeros((3, 3)))
    assert not vp.any() and not vm.any()
