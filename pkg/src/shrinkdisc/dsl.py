"""Operator expressions in t, z, dt, dz and their normal-ordered form.

Grammar (LL(1), whitespace-insensitive, ``*`` mandatory):

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := 't' | 'z' | 'dt' | 'dz' | rational | ident | '(' expr ')'

Rational literals are ``123`` or ``123/456`` (no internal spaces).
Identifiers name series parameters supplied out of band as SeriesTZ
values.  Products are noncommutative and never reordered by the parser.

``normal_order`` rewrites an expression into the canonical form
sum a_{qr}(t,z) dt^q dz^r by repeatedly commuting derivatives to the
right (dt*t = t*dt + 1, dz*z = z*dz + 1, symbols of different names
commute), merging coefficients per (q, r).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .series import SeriesTZ


class OperatorSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UnknownParameterError(ValueError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__(f"unknown parameter '{name}' (line {line}, column {col})")
        self.name = name


# ---------------------------------------------------------------- AST

@dataclass(frozen=True)
class Atom:
    kind: str  # 't' | 'z' | 'dt' | 'dz'


@dataclass(frozen=True)
class Lit:
    value: Fraction


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


ATOMS = ("t", "z", "dt", "dz")


# ---------------------------------------------------------------- lexer

def _tokenize(src: str):
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in "+-*^()":
            toks.append((ch, ch, line, col))
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            num = int(src[i:j])
            den = 1
            if j < len(src) and src[j] == "/":
                j += 1
                if j >= len(src) or not src[j].isdigit():
                    raise OperatorSyntaxError("expected denominator digits after '/'", line, col)
                j0 = j
                while j < len(src) and src[j].isdigit():
                    j += 1
                den = int(src[j0:j])
                if den == 0:
                    raise OperatorSyntaxError("zero denominator", line, col)
            toks.append(("num", Fraction(num, den), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(("name", src[i:j], line, col))
            col += j - i
            i = j
            continue
        raise OperatorSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(("end", None, line, col))
    return toks


# ---------------------------------------------------------------- parser

class _Parser:
    def __init__(self, toks, param_names):
        self.toks = toks
        self.pos = 0
        self.param_names = param_names

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind):
        k, v, line, col = self.take()
        if k != kind:
            raise OperatorSyntaxError(f"expected {kind!r}, found {k!r}", line, col)
        return v

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "*":
            self.take()
            node = Mul(node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.peek()[0] == "^":
            self.take()
            k, v, line, col = self.take()
            if k != "num" or v.denominator != 1 or v < 0:
                raise OperatorSyntaxError("exponent must be a nonnegative integer literal", line, col)
            node = Pow(node, int(v))
        return node

    def base(self):
        k, v, line, col = self.take()
        if k == "num":
            return Lit(v)
        if k == "name":
            if v in ATOMS:
                return Atom(v)
            if v not in self.param_names:
                raise UnknownParameterError(v, line, col)
            return Param(v)
        if k == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise OperatorSyntaxError(f"unexpected token {k!r}", line, col)


def parse(source: str, params: dict[str, SeriesTZ] | None = None):
    """Parse an operator expression; parameter names resolve against params."""
    p = _Parser(_tokenize(source), frozenset(params or ()))
    node = p.expr()
    k, _v, line, col = p.peek()
    if k != "end":
        raise OperatorSyntaxError(f"trailing input {k!r}", line, col)
    return node


def pretty(expr) -> str:
    """Canonical source text; parse(pretty(e)) reproduces e."""
    def wrap_mul(e):
        s = pretty(e)
        return f"({s})" if isinstance(e, (Add, Sub)) else s

    def wrap_pow(e):
        s = pretty(e)
        return f"({s})" if isinstance(e, (Add, Sub, Mul, Pow)) else s

    if isinstance(expr, Atom):
        return expr.kind
    if isinstance(expr, Lit):
        return str(expr.value)
    if isinstance(expr, Param):
        return expr.name
    if isinstance(expr, Add):
        return f"{pretty(expr.left)} + {pretty(expr.right)}"
    if isinstance(expr, Sub):
        # right side of '-' binds like a term
        rs = pretty(expr.right)
        if isinstance(expr.right, (Add, Sub)):
            rs = f"({rs})"
        return f"{pretty(expr.left)} - {rs}"
    if isinstance(expr, Mul):
        return f"{wrap_mul(expr.left)}*{wrap_mul(expr.right)}"
    if isinstance(expr, Pow):
        return f"{wrap_pow(expr.base)}^{expr.exponent}"
    raise TypeError(f"not an operator expression: {expr!r}")


def derivative_budget(expr) -> tuple[int, int]:
    """Upper bounds on the dt and dz powers an expression can apply."""
    if isinstance(expr, Atom):
        return (1, 0) if expr.kind == "dt" else (0, 1) if expr.kind == "dz" else (0, 0)
    if isinstance(expr, (Lit, Param)):
        return (0, 0)
    if isinstance(expr, (Add, Sub, Mul)):
        lt, lz = derivative_budget(expr.left)
        rt, rz = derivative_budget(expr.right)
        if isinstance(expr, Mul):
            return lt + rt, lz + rz
        return max(lt, rt), max(lz, rz)
    if isinstance(expr, Pow):
        bt, bz = derivative_budget(expr.base)
        return bt * expr.exponent, bz * expr.exponent
    raise TypeError(f"not an operator expression: {expr!r}")


# ---------------------------------------------------------------- normal form

class NormalOperator:
    """Canonical form sum a_{qr}(t,z) dt^q dz^r.

    terms maps (q, r) to a nonzero SeriesTZ coefficient.  Two expressions
    that agree as operators on power series normalize to identical maps
    at a common truncation.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], SeriesTZ]):
        self.terms = {qr: a for qr, a in sorted(terms.items()) if not a.is_zero()}

    @property
    def n_order(self) -> int:
        return min((a.n_order for a in self.terms.values()), default=0)

    @property
    def k_order(self) -> int:
        return min((a.k_order for a in self.terms.values()), default=0)

    def max_dt(self) -> int:
        return max((q for (q, _r) in self.terms), default=0)

    def max_dz(self) -> int:
        return max((r for (_q, r) in self.terms), default=0)

    def truncate(self, n_order: int, k_order: int) -> "NormalOperator":
        return NormalOperator(
            {qr: a.truncate(n_order, k_order) for qr, a in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, NormalOperator) and self.terms == other.terms

    def __repr__(self):
        parts = [f"({a!r})*dt^{q}*dz^{r}" for (q, r), a in self.terms.items()]
        return "NormalOperator(" + " + ".join(parts or ["0"]) + ")"


def _map_add(acc: dict, key, series: SeriesTZ):
    cur = acc.get(key)
    acc[key] = series if cur is None else cur + series


def _compose(a_terms: dict, b_terms: dict) -> dict:
    """Product of two normal forms, renormalized by the Leibniz rule."""
    out: dict[tuple[int, int], SeriesTZ] = {}
    for (q1, r1), a1 in a_terms.items():
        for (q2, r2), a2 in b_terms.items():
            dz_j = a2
            for j in range(r1 + 1):
                dt_i = dz_j
                for i in range(q1 + 1):
                    if not dt_i.is_zero():
                        c = math.comb(q1, i) * math.comb(r1, j)
                        coeff = a1 * dt_i.scale(c)
                        if not coeff.is_zero():
                            _map_add(out, (q1 - i + q2, r1 - j + r2), coeff)
                    if i < q1:
                        dt_i = dt_i.dt()
                if j < r1:
                    dz_j = dz_j.dz()
    return {k: v for k, v in out.items() if not v.is_zero()}


def normal_order(
    expr,
    params: dict[str, SeriesTZ] | None = None,
    n_order: int = 16,
    k_order: int = 16,
) -> NormalOperator:
    """Normal-order an expression at working truncation (n_order, k_order).

    Atoms are instantiated with enough extra orders to absorb every
    derivative the expression can apply, so polynomial coefficient data
    stays exact down to the requested truncation.  Parameter series cap
    the window at whatever resolution they were supplied with.
    """
    params = params or {}
    dt_n, dz_n = derivative_budget(expr)
    NW, KW = n_order + dt_n, k_order + dz_n

    def build(e) -> dict:
        if isinstance(e, Atom):
            if e.kind == "t":
                return {(0, 0): SeriesTZ.monomial(1, 0, 1, NW, KW)}
            if e.kind == "z":
                return {(0, 0): SeriesTZ.monomial(0, 1, 1, NW, KW)}
            if e.kind == "dt":
                return {(1, 0): SeriesTZ.const(1, NW, KW)}
            return {(0, 1): SeriesTZ.const(1, NW, KW)}
        if isinstance(e, Lit):
            if e.value == 0:
                return {}
            return {(0, 0): SeriesTZ.const(e.value, NW, KW)}
        if isinstance(e, Param):
            s = params[e.name]
            return {(0, 0): s.truncate(min(s.n_order, NW), min(s.k_order, KW))}
        if isinstance(e, (Add, Sub)):
            left = build(e.left)
            right = build(e.right)
            out = dict(left)
            for key, series in right.items():
                _map_add(out, key, series if isinstance(e, Add) else -series)
            return {k: v for k, v in out.items() if not v.is_zero()}
        if isinstance(e, Mul):
            return _compose(build(e.left), build(e.right))
        if isinstance(e, Pow):
            acc = {(0, 0): SeriesTZ.const(1, NW, KW)}
            base = build(e.base)
            for _ in range(e.exponent):
                acc = _compose(acc, base)
            return acc
        raise TypeError(f"not an operator expression: {e!r}")

    terms = build(expr)
    op = NormalOperator(terms)
    return op.truncate(min(op.n_order, n_order), min(op.k_order, k_order)) if terms else op


def build_operator(
    source: str,
    params: dict[str, SeriesTZ] | None = None,
    n_order: int = 16,
    k_order: int = 16,
) -> NormalOperator:
    """Parse and normal-order with margins wide enough for theta work.

    The one-variable reduction shifts each coefficient slice down by up
    to its dz power, so the coefficients are built with the expression's
    dz budget as extra z-orders; the returned operator then supports
    solving and row recurrences at the full requested k_order.
    """
    params = params or {}
    expr = parse(source, params)
    _dt_n, dz_n = derivative_budget(expr)
    return normal_order(expr, params, n_order, k_order + dz_n)


def apply_operator(P: NormalOperator, u: SeriesTZ) -> SeriesTZ:
    """Apply sum a_{qr} dt^q dz^r to u, exact on the surviving window.

    The result is truncated to the rectangle on which every convolution
    is complete: losses are max(q - ord_t a_qr) in t and
    max(r - ord_z a_qr) in z over the stored terms.
    """
    from .solver import apply_full

    return apply_full(P, 0, u)
