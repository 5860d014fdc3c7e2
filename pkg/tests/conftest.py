import numpy as np
import pytest

from ballmaps import LFMap


@pytest.fixture
def worked_map() -> LFMap:
    """Self-map of B^2 with boundary contact at (1, 0), used throughout.

    A = diag(1, 2), B = e1, C = -e1, D = 3; the image ellipsoid has
    center (1/2, 0) and shape diag(-1/2, -sqrt(2)/2).
    """
    return LFMap(np.diag([1.0, 2.0]), [1.0, 0.0], [-1.0, 0.0], 3.0)


def random_ball_point(rng: np.random.Generator, n: int, radius: float = 0.9) -> np.ndarray:
    g = rng.standard_normal(2 * n)
    z = g[::2] + 1j * g[1::2]
    return z * (radius * rng.uniform() ** (1.0 / (2 * n)) / np.linalg.norm(z))


def random_complex_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
