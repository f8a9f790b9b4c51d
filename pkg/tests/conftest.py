import time

import pytest

from shrinkdisc import analyze_operator, solve_full
from shrinkdisc.dsl import build_operator
from shrinkdisc import fixtures


@pytest.fixture(scope="session")
def geometric_small():
    """Geometric fixture operator at module-test size."""
    src, params = fixtures.geometric()
    return build_operator(src, params, 16, 48)


@pytest.fixture(scope="session")
def geometric_theta(geometric_small):
    _m, _pm, T = analyze_operator(geometric_small)
    return T


@pytest.fixture(scope="session")
def geometric_table_64_256():
    """The large exact table (n <= 64, k <= 256); built once, timed."""
    src, params = fixtures.geometric()
    t0 = time.time()
    P = build_operator(src, params, 64, 256)
    g = fixtures.unit_column_rhs(64, 256)
    table = solve_full(P, 0, g, check_residual=False)
    return table.u, time.time() - t0


@pytest.fixture(scope="session")
def geometric31_table_64_256():
    """Same but for the (mu, nu) = (3, 1) variant: u_{n,k} = (n+1)^{2k}."""
    src, params = fixtures.geometric_general(3, 1)
    t0 = time.time()
    P = build_operator(src, params, 64, 256)
    g = fixtures.unit_column_rhs(64, 256)
    table = solve_full(P, 0, g, check_residual=False)
    return table.u, time.time() - t0
