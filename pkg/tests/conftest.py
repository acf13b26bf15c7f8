import numpy as np
import pytest

from ringtherm import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger numba JIT once so timed tests measure the algorithms, not compilation."""
    kernels.wall_degeneracy(3)
    kernels.count_walls_batch(np.array([[1, -1, 1]], dtype=np.int8))
    kernels.realize_configs(
        3, np.array([1]), np.array([[0.5]]), np.zeros(1, dtype=np.uint8)
    )
