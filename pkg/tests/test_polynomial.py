from fractions import Fraction

import pytest

from shrinkdisc.polynomial import Poly


class TestPoly:
    def test_trimming_and_degree(self):
        assert Poly([1, 2, 0, 0]).degree == 1
        assert Poly([]).degree == -1
        assert Poly([0, 0]).is_zero()

    def test_falling_factorial(self):
        ff3 = Poly.falling(3)
        for n in range(8):
            assert ff3(n) == n * (n - 1) * (n - 2)
        assert Poly.falling(0) == Poly([1])

    def test_arithmetic(self):
        a = Poly([1, 1])
        assert a * a == Poly([1, 2, 1])
        assert a + Poly([-1, -1]) == Poly()
        assert (a**3)(2) == 27
        assert a.scale(Fraction(1, 2)) == Poly([Fraction(1, 2), Fraction(1, 2)])

    def test_horner_matches_power_sum(self):
        p = Poly([Fraction(3, 7), -2, 0, 5])
        for n in range(-3, 6):
            assert p(n) == sum(c * n**t for t, c in enumerate(p.coeffs))

    def test_leading_and_abs_sum(self):
        p = Poly([1, -4, 2])
        assert p.leading == 2
        assert p.abs_coeff_sum() == 7
        with pytest.raises(ValueError):
            Poly().leading
