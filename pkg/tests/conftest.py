import numpy as np
import pytest

from qdefect import ModelParams, RadialGrid, minimize


@pytest.fixture(scope="session")
def solve_cache():
    """Memoised minimiser runs shared across test modules."""
    cache = {}

    def get(a2=1.0, b2=0.0, c2=1.0, L=0.1, R=1.0, k=1, n=256, tol=1e-9):
        key = (a2, b2, c2, L, R, k, n, tol)
        if key not in cache:
            params = ModelParams(a2=a2, b2=b2, c2=c2, L=L, R=R, k=k)
            grid = RadialGrid.for_defect(R, n, k)
            profile, report = minimize(params, grid, tol=tol)
            cache[key] = (params, profile, report)
        return cache[key]

    return get


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
