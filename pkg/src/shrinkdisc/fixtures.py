"""Built-in demonstration operators.

Three families exercise the whole pipeline:

* ``geometric``: (dt t)(dz z) - (dt t)^2 z (dz z + 1).  Radii must
  shrink like 1/(n+1); the solution of the unit-column right side is
  the geometric table u_{n,k} = (n+1)^k.
* ``geometric_general(mu, nu)``: (dt t)(dz z) - (dt t)^mu z^nu (dz z + nu),
  decay exponent (mu-1)/nu; mu=2, nu=1 recovers ``geometric``.
* ``constant_diagonal(h)``: constant indicial polynomial (the strong
  bound is the constant itself), derived Gevrey order 1, decay exponent
  0, so no shrinking is needed at all.
"""
from __future__ import annotations

from fractions import Fraction

from .series import SeriesTZ


def geometric() -> tuple[str, dict]:
    return "dt*t*dz*z - (dt*t)^2*z*(dz*z + 1)", {}


def geometric_general(mu: int, nu: int) -> tuple[str, dict]:
    if mu < 2 or nu < 1:
        raise ValueError("need mu >= 2 and nu >= 1")
    return f"dt*t*dz*z - (dt*t)^{mu}*z^{nu}*(dz*z + {nu})", {}


def constant_diagonal(
    h: int = 4,
    a: Fraction = Fraction(2),
    b: Fraction = Fraction(1),
    c: Fraction = Fraction(1),
    n_order: int = 16,
    k_order: int = 16,
) -> tuple[str, dict]:
    """p0 dt + p1 dt dz + p2 t dt^2 dz with polynomial parameter series.

    p0 = a + z + t  (diagonal slice a + z, one t-tail row)
    p1 = b z^2
    p2 = c z^h
    """
    if h <= 2:
        raise ValueError("need h > 2")
    p0 = SeriesTZ({(0, 0): a, (0, 1): 1, (1, 0): 1}, n_order, k_order)
    p1 = SeriesTZ({(0, 2): b}, n_order, k_order)
    p2 = SeriesTZ({(0, h): c}, n_order, k_order)
    return "p0*dt + p1*dt*dz + p2*t*dt^2*dz", {"p0": p0, "p1": p1, "p2": p2}


def unit_column_rhs(n_order: int, k_order: int) -> SeriesTZ:
    """g = sum over n of (n+1) t^n, the right side of the geometric table."""
    return SeriesTZ({(n, 0): n + 1 for n in range(n_order + 1)}, n_order, k_order)


FIXTURES = {
    "geometric": geometric,
    "geometric-general": geometric_general,
    "constant-diagonal": constant_diagonal,
}
