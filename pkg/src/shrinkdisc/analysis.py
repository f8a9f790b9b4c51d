"""Reduction of a normal-ordered operator to its one-variable family.

Writing P = sum a_{qr}(t,z) dt^q dz^r, the antiderivative order is

    m = max over terms of (q - ord_t a_qr),      required to be >= 0.

Keeping only the terms that attain m, sliced at their lowest t-row,
gives the principal part.  Conjugating by the m-fold antiderivative
turns the principal part into a family of one-variable operators in z,
indexed by the t-row n: each term contributes

    atilde(z) * z^alpha * n(n-1)...(n-(q-m)+1) * dz^r,

where a-slice = z^alpha * atilde(z) with atilde(0) != 0.  Converting
z^alpha dz^r into the Euler variable via

    z^r dz^r = (z dz)(z dz - 1)...(z dz - r + 1)

(Stirling numbers of the first kind) produces the theta form: a list of
terms  w(n) * a(z) * z^j * (z dz)^i  with a(0) != 0.  Terms sharing the
label (i, j) are kept as separate list entries; the combined label
polynomial sums w * a(0) over them.

Terms with j = 0 are normalized so their a(z) is constant: the tail
a(z) - a(0) is split off into a higher-shift entry.  This makes the
diagonal of the coefficient recurrence read off exactly as the
indicial polynomial W(n, k) = sum_i w_{i0}(n) a_{i0}(0) k^i.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .dsl import NormalOperator
from .polynomial import Poly
from .series import ORD_INFINITE, SeriesTZ, SeriesZ


class HypothesisError(ValueError):
    """The antiderivative order m came out negative."""


class NegativeLowerOrdinateError(ValueError):
    def __init__(self, l: int, term):
        super().__init__(
            f"lower ordinate {l} < 0 (term dt^{term[0]} dz^{term[1]}); "
            "condition (a) fails"
        )
        self.l = l
        self.term = term


class NoDiagonalStratumError(ValueError):
    """The theta form has no j = 0 entries, so there is no indicial data."""


@lru_cache(maxsize=None)
def stirling_first(r: int, i: int) -> int:
    """Signed Stirling numbers: x(x-1)...(x-r+1) = sum_i s(r,i) x^i."""
    if r == 0:
        return 1 if i == 0 else 0
    if i < 0 or i > r:
        return 0
    return stirling_first(r - 1, i - 1) - (r - 1) * stirling_first(r - 1, i)


def compute_m(P: NormalOperator) -> int:
    """max over terms of q - ord_t(a_qr); errors if negative."""
    if not P.terms:
        raise ValueError("operator has no terms")
    best = None
    for (q, _r), a in P.terms.items():
        o = a.ord_t()
        if o is ORD_INFINITE:
            continue
        v = q - o
        best = v if best is None else max(best, v)
    if best is None:
        raise ValueError("operator has no nonzero coefficients at this truncation")
    if best < 0:
        raise HypothesisError(
            f"every term has q < ord_t(a_qr); the antiderivative order m = {best} "
            "would be negative"
        )
    return best


def principal_part(P: NormalOperator, m: int) -> NormalOperator:
    """Terms attaining m, each coefficient cut to its t^{q-m} slice."""
    terms = {}
    for (q, r), a in P.terms.items():
        if a.ord_t() != q - m:
            continue
        row = a.row(q - m)
        ent = {(q - m, k): v for k, v in row.nonzero_items()}
        terms[(q, r)] = SeriesTZ(ent, a.n_order, a.k_order)
    return NormalOperator(terms)


@dataclass(frozen=True)
class ThetaTerm:
    i: int
    j: int
    w: Poly
    a: SeriesZ  # a(0) != 0
    src: tuple[int, int]  # originating (q, r)


class ThetaOperator:
    """One-variable operator family sum w(n) a(z) z^j (z dz)^i.

    ``dz_terms`` retains the pre-conversion slices (q, r, alpha, atilde),
    so the derivative form of the family stays available as an
    independent cross-check of the Euler conversion.
    """

    def __init__(self, terms, m: int, l: int, dz_terms=()):
        self.terms = tuple(t for t in terms if not t.w.is_zero() and not t.a.is_zero())
        self.m = m
        self.l = l
        self.dz_terms = tuple(dz_terms)

    def labels(self) -> dict[tuple[int, int], Poly]:
        """Combined polynomial per (i, j): sum of w * a(0) over entries."""
        out: dict[tuple[int, int], Poly] = {}
        for t in self.terms:
            key = (t.i, t.j)
            add = t.w.scale(t.a.eval0())
            out[key] = out.get(key, Poly()) + add
        return {key: p for key, p in sorted(out.items()) if not p.is_zero()}

    def support_at(self, n: int) -> set[tuple[int, int]]:
        """Labels with at least one entry whose w does not vanish at n."""
        return {(t.i, t.j) for t in self.terms if t.w(n) != 0}

    def stability_index(self) -> int:
        """Row n* past which no entry polynomial vanishes.

        Entry polynomials are scalar multiples of falling factorials, so
        their integer roots all lie below their degree.
        """
        return max((t.w.degree for t in self.terms), default=0)

    def min_a_window(self) -> int:
        """Largest K for which every entry's a(z) covers orders up to K - j."""
        return min((t.a.order + t.j for t in self.terms), default=0)

    def apply_at(self, n, u: SeriesZ) -> SeriesZ:
        """Action of the theta form at row n: (z dz)^i scales z^k by k^i."""
        K = u.order
        out = SeriesZ.zero(K)
        for t in self.terms:
            wn = t.w(n)
            if wn == 0:
                continue
            scaled = SeriesZ([Fraction(k) ** t.i * u.coeffs[k] for k in range(K + 1)], K)
            prod = t.a.truncate(min(t.a.order, K)) * scaled
            out = out + prod.shift(t.j).truncate(K).scale(wn)
        return out

    def apply_dz_form_at(self, n, u: SeriesZ) -> SeriesZ:
        """Action through the derivative shape atilde(z) z^alpha dz^r.

        Independent of the Stirling conversion: dz^r sends z^k to
        k(k-1)...(k-r+1) z^{k-r} before the z^alpha shift.
        """
        K = u.order
        out = SeriesZ.zero(K)
        for q, r, alpha, atil in self.dz_terms:
            wn = Poly.falling(q - self.m)(n)
            if wn == 0:
                continue
            moved = [Fraction(0)] * (K + 1)
            for k in range(K + 1):
                if u.coeffs[k] == 0 or k < r:
                    continue
                ff = 1
                for t in range(r):
                    ff *= k - t
                kk = k - r + alpha
                if kk <= K:
                    moved[kk] += ff * u.coeffs[k]
            prod = atil.truncate(min(atil.order, K)) * SeriesZ(moved, K)
            out = out + prod.scale(wn)
        return out

    def __repr__(self):
        return f"ThetaOperator({len(self.terms)} terms, m={self.m}, l={self.l})"


def reduce_to_theta(P_m: NormalOperator, m: int) -> ThetaOperator:
    """Euler-form reduction of a principal part.

    Errors with the offending lower ordinate when some slice has
    z-order below its dz power (the polygon would dip under the axis).
    """
    raw = []  # (q, r, alpha, atilde)
    l = None
    for (q, r), a in sorted(P_m.terms.items()):
        row = a.row(q - m)
        alpha = row.ord_z()
        if alpha is ORD_INFINITE:
            # truncation cannot distinguish zero from high order
            warnings.warn(
                f"slice of dt^{q} dz^{r} vanishes at this truncation; term dropped",
                stacklevel=2,
            )
            continue
        j = alpha - r
        l = j if l is None else min(l, j)
        raw.append((q, r, alpha, row.shifted_down(alpha)))
    if l is None:
        raise ValueError("principal part is zero at this truncation")
    if l < 0:
        bad = min(raw, key=lambda t: t[2] - t[1])
        raise NegativeLowerOrdinateError(l, (bad[0], bad[1]))

    terms = []
    for q, r, alpha, atil in raw:
        ff = Poly.falling(q - m)
        j = alpha - r
        for i in range(r + 1):
            s1 = stirling_first(r, i)
            if s1 == 0:
                continue
            terms.append(ThetaTerm(i, j, ff.scale(s1), atil, (q, r)))

    return ThetaOperator(_normalize_diagonal(terms), m, l, dz_terms=raw)


def _normalize_diagonal(terms) -> list[ThetaTerm]:
    """Split j = 0 entries into a constant head plus a shifted tail."""
    out = []
    for t in terms:
        if t.j != 0:
            out.append(t)
            continue
        head = t.a.eval0()
        out.append(ThetaTerm(t.i, 0, t.w, SeriesZ([head], t.a.order), t.src))
        tail = t.a - SeriesZ([head], t.a.order)
        if not tail.is_zero():
            e = tail.ord_z()
            out.append(ThetaTerm(t.i, e, t.w, tail.shifted_down(e), t.src))
    return out


@dataclass(frozen=True)
class ExponentReport:
    m: int
    l: int
    p: int
    s: Fraction
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    gamma_tilde: Fraction
    deg_table: tuple[tuple[int, int, int], ...]

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "l": self.l,
            "p": self.p,
            "s": str(self.s),
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "gamma": str(self.gamma),
            "gamma_tilde": str(self.gamma_tilde),
            "deg_table": [list(row) for row in self.deg_table],
        }


def exponents(T: ThetaOperator) -> ExponentReport:
    """Growth exponents of the operator family.

    s measures how far the z-shifted part outruns the diagonal Euler
    power p; alpha is the radius-decay exponent read off the degree gap
    along the critical line i - p = j*s.  beta/gamma/gamma_tilde are the
    auxiliary exponents used by the coefficient estimates; beta is
    clamped at 0 so alpha <= beta holds unconditionally.
    """
    labels = T.labels()
    lambda0 = sorted(i for (i, j) in labels if j == 0)
    if not lambda0:
        raise NoDiagonalStratumError("no j = 0 stratum in the theta form")
    p = lambda0[-1]
    deg = {key: poly.degree for key, poly in labels.items()}
    prim = [(i, j) for (i, j) in labels if j > 0]

    zero = Fraction(0)
    s = max([zero] + [Fraction(i - p, j) for (i, j) in prim])
    crit = [(i, j) for (i, j) in prim if Fraction(i - p, j) == s]
    alpha = max([zero] + [Fraction(deg[(i, j)] - deg[(p, 0)], j) for (i, j) in crit])
    beta = max([zero] + [Fraction(deg[(i, j)] - deg[(p, 0)], j) for (i, j) in prim])
    gamma = max(
        [zero]
        + [
            Fraction(deg[(i, 0)] - deg[(p, 0)], p - i)
            for i in lambda0
            if i != p
        ]
    )
    off_crit = [(i, j) for (i, j) in prim if (i, j) not in crit]
    if off_crit:
        s_prime = max(Fraction(i - p, j) for (i, j) in off_crit)
        gamma_tilde = max(Fraction(j) * (beta - alpha) / (s - s_prime) for (i, j) in prim)
    else:
        gamma_tilde = zero

    table = tuple(sorted((i, j, deg[(i, j)]) for (i, j) in labels))
    return ExponentReport(
        m=T.m,
        l=T.l,
        p=p,
        s=s,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        gamma_tilde=gamma_tilde,
        deg_table=table,
    )


def analyze_operator(P: NormalOperator):
    """Convenience pipeline: m, principal part, theta form."""
    m = compute_m(P)
    P_m = principal_part(P, m)
    T = reduce_to_theta(P_m, m)
    return m, P_m, T
