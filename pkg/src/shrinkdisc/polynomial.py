"""Exact univariate polynomials over the rationals.

Coefficient polynomials in the row index n appear everywhere downstream
(falling factorials, indicial polynomials, degree tables), so the degree
must always be the honest one: coefficient vectors are kept trimmed and
``degree`` is the index of the last nonzero coefficient, -1 for zero.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Poly:
    """Polynomial with exact rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def variable(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def falling(cls, d: int) -> "Poly":
        """n(n-1)...(n-d+1); the empty product (d=0) is the constant 1."""
        if d < 0:
            raise ValueError("falling factorial length must be >= 0")
        p = cls((1,))
        for t in range(d):
            p = p * cls((-t, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, n) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for t, c in enumerate(b):
            out[t] += c
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for s, cs in enumerate(self.coeffs):
            if cs == 0:
                continue
            for t, ct in enumerate(other.coeffs):
                out[s + t] += cs * ct
        return Poly(out)

    def scale(self, c) -> "Poly":
        c = _rat(c)
        return Poly(tuple(c * x for x in self.coeffs))

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        out = Poly((1,))
        for _ in range(e):
            out = out * self
        return out

    def abs_coeff_sum(self) -> Fraction:
        return sum((abs(c) for c in self.coeffs), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        parts = []
        for t, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if t == 0:
                parts.append(str(c))
            elif t == 1:
                parts.append(f"{c}*n")
            else:
                parts.append(f"{c}*n^{t}")
        return "Poly(" + " + ".join(parts) + ")"
