import random
from fractions import Fraction

import pytest

from shrinkdisc.dsl import (
    Add,
    Atom,
    Lit,
    Mul,
    OperatorSyntaxError,
    Pow,
    Sub,
    UnknownParameterError,
    apply_operator,
    build_operator,
    normal_order,
    parse,
    pretty,
)
from shrinkdisc.series import SeriesTZ
from shrinkdisc import fixtures


def interpret(expr, u, params=None):
    """Direct recursive action of an expression on a series.

    Independent of normal ordering: this is the oracle that fixes what
    an expression means as an operator.
    """
    params = params or {}
    if isinstance(expr, Atom):
        if expr.kind == "t":
            return u.mul_t().truncate(u.n_order, u.k_order)
        if expr.kind == "z":
            return u.mul_z().truncate(u.n_order, u.k_order)
        if expr.kind == "dt":
            return u.dt()
        return u.dz()
    if isinstance(expr, Lit):
        return u.scale(expr.value)
    if hasattr(expr, "name"):
        return params[expr.name] * u
    if isinstance(expr, (Add, Sub)):
        left = interpret(expr.left, u, params)
        right = interpret(expr.right, u, params)
        return left + right if isinstance(expr, Add) else left - right
    if isinstance(expr, Mul):
        return interpret(expr.left, interpret(expr.right, u, params), params)
    if isinstance(expr, Pow):
        out = u
        for _ in range(expr.exponent):
            out = interpret(expr.base, out, params)
        return out
    raise TypeError


class TestParse:
    def test_dt_times_t(self):
        assert parse("dt*t") == Mul(Atom("dt"), Atom("t"))

    def test_pow_of_product(self):
        assert parse("(dt*t)^2") == Pow(Mul(Atom("dt"), Atom("t")), 2)

    def test_geometric_source_shape(self):
        e = parse("dt*t*dz*z - (dt*t)^2*z*(dz*z+1)")
        assert isinstance(e, Sub)
        assert e.left == Mul(Mul(Mul(Atom("dt"), Atom("t")), Atom("dz")), Atom("z"))
        assert e.right == Mul(
            Mul(Pow(Mul(Atom("dt"), Atom("t")), 2), Atom("z")),
            Add(Mul(Atom("dz"), Atom("z")), Lit(Fraction(1))),
        )

    def test_rational_literal(self):
        assert parse("3/4*t") == Mul(Lit(Fraction(3, 4)), Atom("t"))

    def test_factor_order_preserved(self):
        assert parse("t*dt") != parse("dt*t")

    def test_syntax_error_carries_position(self):
        with pytest.raises(OperatorSyntaxError) as err:
            parse("dt*\n*t")
        assert err.value.line == 2
        assert err.value.col == 1

    def test_unknown_parameter(self):
        with pytest.raises(UnknownParameterError):
            parse("t*q0", {})

    def test_negative_exponent_rejected(self):
        parse("t^0 - 1*t^2")  # binary minus is fine
        with pytest.raises(OperatorSyntaxError):
            parse("t^-1")
        with pytest.raises(OperatorSyntaxError):
            parse("t^(2)")

    def test_pretty_round_trip(self):
        sources = [
            "dt*t",
            "(dt*t)^2",
            "dt*t*dz*z - (dt*t)^2*z*(dz*z + 1)",
            "1/2 + 3*t - z^4",
            "t - (z - dt)",
        ]
        for src in sources:
            ast = parse(src)
            assert parse(pretty(ast)) == ast


class TestNormalOrder:
    def test_dt_t(self):
        P = normal_order(parse("dt*t"), n_order=6, k_order=6)
        assert set(P.terms) == {(0, 0), (1, 0)}
        assert P.terms[(0, 0)] == SeriesTZ.const(1, 6, 6)
        assert P.terms[(1, 0)] == SeriesTZ.monomial(1, 0, 1, 6, 6)

    def test_dt_t_squared(self):
        # action on t^n is (n+1)^2 = n(n-1) + 3n + 1
        P = normal_order(parse("(dt*t)^2"), n_order=10, k_order=2)
        assert set(P.terms) == {(0, 0), (1, 0), (2, 0)}
        assert P.terms[(1, 0)] == SeriesTZ.monomial(1, 0, 3, 10, 2)
        assert P.terms[(2, 0)] == SeriesTZ.monomial(2, 0, 1, 10, 2)
        for n in range(11):
            u = SeriesTZ.monomial(n, 0, 1, 12, 2)
            out = apply_operator(P.truncate(12, 2), u)
            assert out.coeff(n, 0) == (n + 1) ** 2

    def test_geometric_term_map(self):
        src, params = fixtures.geometric()
        P = build_operator(src, params, 8, 8)
        expected_keys = {(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)}
        assert set(P.terms) == expected_keys
        # spot checks from the hand expansion
        assert P.terms[(1, 1)].coeff(1, 1) == 1
        assert P.terms[(1, 1)].coeff(1, 2) == -3
        assert P.terms[(2, 1)].coeff(2, 2) == -1
        assert P.terms[(0, 0)].coeff(0, 1) == -2

    def test_uniqueness_of_normal_form(self):
        # operator equality implies identical term maps at common truncation
        pairs = [
            ("dt*t", "t*dt + 1"),
            ("dz*z*dz*z", "z^2*dz^2 + 3*z*dz + 1"),
            ("(dt*t)*(dz*z)", "t*z*dt*dz + t*dt + z*dz + 1"),
        ]
        for left, right in pairs:
            P1 = normal_order(parse(left), n_order=6, k_order=6)
            P2 = normal_order(parse(right), n_order=6, k_order=6)
            assert P1 == P2, (left, right)

    def test_idempotent_on_canonical_form(self):
        src, params = fixtures.geometric()
        P = build_operator(src, params, 6, 6)
        rebuilt = " + ".join(
            f"({_series_source(a)})*dt^{q}*dz^{r}" for (q, r), a in P.terms.items()
        )
        P2 = normal_order(parse(rebuilt), n_order=6, k_order=6)
        assert P2.truncate(6, 6) == P.truncate(6, 6)

    def test_action_matches_interpreter_on_random_expressions(self):
        rng = random.Random(42)
        atoms = ["t", "z", "dt", "dz", "2", "1/3"]

        def rand_expr(depth):
            if depth == 0:
                return rng.choice(atoms)
            op = rng.choice(["+", "-", "*", "^", "()"])
            if op == "^":
                return f"({rand_expr(depth - 1)})^{rng.randint(0, 2)}"
            if op == "()":
                return f"({rand_expr(depth - 1)})"
            return f"{rand_expr(depth - 1)} {op} {rand_expr(depth - 1)}".replace(
                " * ", "*"
            ).replace(" ", "") if op == "*" else f"{rand_expr(depth-1)} {op} {rand_expr(depth-1)}"

        for trial in range(30):
            src = rand_expr(3)
            try:
                ast = parse(src)
            except OperatorSyntaxError:
                continue
            P = normal_order(ast, n_order=6, k_order=6)
            u = SeriesTZ(
                {
                    (n, k): Fraction(rng.randint(-4, 4))
                    for n in range(7)
                    for k in range(7)
                },
                6,
                6,
            )
            direct = interpret(ast, u)
            via_normal = apply_operator(P, u)
            N = min(direct.n_order, via_normal.n_order)
            K = min(direct.k_order, via_normal.k_order)
            assert direct.truncate(N, K) == via_normal.truncate(N, K), src

    def test_normal_ordering_sound_on_monomials(self):
        src, params = fixtures.geometric()
        ast = parse(src, params)
        P = normal_order(ast, params, n_order=12, k_order=12)
        for n in range(9):
            for k in range(9):
                u = SeriesTZ.monomial(n, k, 1, 12, 12)
                direct = interpret(ast, u, params)
                via = apply_operator(P, u)
                N = min(direct.n_order, via.n_order)
                K = min(direct.k_order, via.k_order)
                assert direct.truncate(N, K) == via.truncate(N, K)


def _series_source(a: SeriesTZ) -> str:
    # the grammar has no unary minus: negative coefficients join with ' - '
    out = ""
    for n, k, c in a.items():
        mag = "*".join([str(abs(c))] + ["t"] * n + ["z"] * k)
        if not out:
            out = mag if c > 0 else f"0 - {mag}"
        else:
            out += f" + {mag}" if c > 0 else f" - {mag}"
    return out or "0"


class TestApply:
    def test_identity_operator(self):
        P = normal_order(parse("1"), n_order=5, k_order=5)
        rng = random.Random(2)
        u = SeriesTZ(
            {(n, k): Fraction(rng.randint(-3, 3)) for n in range(6) for k in range(6)},
            5,
            5,
        )
        assert apply_operator(P, u) == u

    def test_geometric_action_on_its_solution(self):
        src, params = fixtures.geometric()
        P = build_operator(src, params, 10, 10)
        u = SeriesTZ(
            {(n, k): Fraction(n + 1) ** k for n in range(11) for k in range(11)},
            10,
            10,
        )
        out = apply_operator(P, u)
        for n in range(out.n_order + 1):
            for k in range(out.k_order + 1):
                assert out.coeff(n, k) == (Fraction(n + 1) if k == 0 else Fraction(0))
