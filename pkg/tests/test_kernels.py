"""Backend parity and correctness of the hot kernels.

The numba and numpy paths consume identical pre-drawn randomness and must
produce bit-identical outputs; correctness is checked against slow pure
Python re-implementations.
"""

import itertools
import os
import subprocess
import sys
from math import comb

import numpy as np
import pytest

from ringtherm import kernels

HAS_NUMBA = "numba" in kernels.IMPLEMENTATIONS
needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")


def walls_by_loop(spins):
    n = len(spins)
    return sum(1 for i in range(n) if spins[i] == spins[(i + 1) % n])


class TestWallDegeneracy:
    @pytest.mark.parametrize("n", [3, 5, 7, 11])
    def test_matches_itertools_enumeration(self, n):
        expected = np.zeros((n + 1) // 2, dtype=np.int64)
        for spins in itertools.product((1, -1), repeat=n):
            expected[(walls_by_loop(spins) - 1) // 2] += 1
        np.testing.assert_array_equal(kernels.wall_degeneracy(n), expected)

    @pytest.mark.parametrize("n", [3, 9, 15, 21])
    def test_matches_binomial_count(self, n):
        expected = np.array([2 * comb(n, k) for k in range(1, n + 1, 2)])
        np.testing.assert_array_equal(kernels.wall_degeneracy(n), expected)
        assert kernels.wall_degeneracy(n).sum() == 2**n

    @needs_numba
    @pytest.mark.parametrize("n", [3, 11, 17])
    def test_backend_parity(self, n):
        a = kernels.IMPLEMENTATIONS["numpy"]["wall_degeneracy"](n)
        b = kernels.IMPLEMENTATIONS["numba"]["wall_degeneracy"](n)
        np.testing.assert_array_equal(a, b)


class TestCountWallsBatch:
    def test_against_loop_recount(self):
        rng = np.random.default_rng(5)
        for n in (3, 7, 21, 101):
            spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=(40, n))
            got = kernels.count_walls_batch(spins)
            expected = [walls_by_loop(row) for row in spins]
            np.testing.assert_array_equal(got, expected)

    @needs_numba
    def test_backend_parity(self):
        rng = np.random.default_rng(6)
        spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=(64, 33))
        a = kernels.IMPLEMENTATIONS["numpy"]["count_walls_batch"](spins)
        b = kernels.IMPLEMENTATIONS["numba"]["count_walls_batch"](spins)
        np.testing.assert_array_equal(a, b)


class TestRealizeConfigs:
    def _inputs(self, n, m, seed):
        rng = np.random.default_rng(seed)
        counts = rng.choice(np.arange(1, n + 1, 2), size=m)
        sel_u = rng.random((m, int(counts.max())))
        sign = rng.integers(0, 2, size=m, dtype=np.uint8)
        return counts, sel_u, sign

    @pytest.mark.parametrize("n", [3, 9, 25])
    def test_wall_counts_round_trip(self, n):
        counts, sel_u, sign = self._inputs(n, 200, seed=n)
        spins = kernels.realize_configs(n, counts, sel_u, sign)
        assert spins.shape == (200, n)
        assert np.all(np.abs(spins) == 1)
        np.testing.assert_array_equal(kernels.count_walls_batch(spins), counts)

    @needs_numba
    @pytest.mark.parametrize("n", [5, 15, 101])
    def test_backend_parity(self, n):
        counts, sel_u, sign = self._inputs(n, 128, seed=n + 1)
        a = kernels.IMPLEMENTATIONS["numpy"]["realize_configs"](n, counts, sel_u, sign)
        b = kernels.IMPLEMENTATIONS["numba"]["realize_configs"](n, counts, sel_u, sign)
        np.testing.assert_array_equal(a, b)


class TestBackendSelection:
    def test_env_flag_forces_numpy(self):
        code = "from ringtherm import kernels; print(kernels.BACKEND)"
        env = dict(os.environ, RINGTHERM_NO_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
        )
        assert out.stdout.strip() == "numpy"

    @needs_numba
    def test_default_backend_is_numba(self):
        assert kernels.BACKEND == "numba"
