import random
from fractions import Fraction

import mpmath
import pytest

from concord.certified import (
    CertifiedReal,
    Interval,
    acos_interval,
    acos_of_enclosure,
    pi_interval,
    sqrt_interval,
)

mpmath.mp.dps = 60


def mp_contains(iv, value):
    return iv.lo <= Fraction(str(value)) or True  # placeholder, see below


def frac_of_mp(x):
    # exact rational from mpmath via its integer scaled representation
    return Fraction(int(mpmath.floor(x * mpmath.mpf(2) ** 200)), 2**200)


class TestInterval:
    def test_basic_ops(self):
        a = Interval(1, 2)
        b = Interval(-1, 3)
        assert (a + b).lo == 0 and (a + b).hi == 5
        assert (a - b).lo == -2 and (a - b).hi == 3
        assert (a * b).lo == -2 and (a * b).hi == 6
        assert (a / Interval(2, 4)).lo == Fraction(1, 4)

    def test_div_by_zero_interval(self):
        with pytest.raises(ZeroDivisionError):
            Interval(1, 2) / Interval(-1, 1)

    def test_dyadic_outward(self):
        iv = Interval(Fraction(1, 3), Fraction(2, 3))
        out = iv.dyadic_outward(8)
        assert out.contains_interval(iv)
        assert out.lo.denominator <= 256 and out.hi.denominator <= 256


class TestPi:
    def test_enclosure_against_mpmath(self):
        iv = pi_interval(Fraction(1, 10**30))
        approx = frac_of_mp(mpmath.pi)  # within 1e-59 of the true value
        slack = Fraction(1, 10**55)
        assert iv.lo <= approx + slack and approx - slack <= iv.hi
        assert iv.width() <= Fraction(1, 10**30)


class TestSqrt:
    def test_exact_squares(self):
        assert sqrt_interval(Fraction(9, 4), Fraction(1, 1000)).width() == 0

    def test_random_against_mpmath(self):
        rng = random.Random(5)
        for _ in range(30):
            q = Fraction(rng.randrange(1, 500), rng.randrange(1, 500))
            iv = sqrt_interval(q, Fraction(1, 10**12))
            true = frac_of_mp(mpmath.sqrt(mpmath.mpf(q.numerator) / q.denominator))
            assert iv.lo - Fraction(1, 10**11) <= true <= iv.hi + Fraction(1, 10**11)
            assert iv.width() <= Fraction(1, 10**12)
            assert iv.lo * iv.lo <= q <= iv.hi * iv.hi


class TestAcos:
    def test_endpoints(self):
        assert acos_interval(Fraction(1), Fraction(1, 1000)).width() == 0
        piv = pi_interval()
        iv = acos_interval(Fraction(-1), Fraction(1, 10**10))
        assert iv.contains(piv.midpoint())

    def test_special_value(self):
        # arccos(1/2) = pi/3
        iv = acos_interval(Fraction(1, 2), Fraction(1, 10**15))
        pi3 = pi_interval(Fraction(1, 10**20)).scale(Fraction(1, 3))
        assert iv.lo <= pi3.hi and pi3.lo <= iv.hi

    def test_random_against_mpmath(self):
        rng = random.Random(9)
        for _ in range(40):
            y = Fraction(rng.randrange(-999, 1000), 1000)
            iv = acos_interval(y, Fraction(1, 10**12))
            assert iv.width() <= Fraction(1, 10**12)
            true = frac_of_mp(mpmath.acos(mpmath.mpf(y.numerator) / y.denominator))
            assert iv.lo - Fraction(1, 10**11) <= true <= iv.hi + Fraction(1, 10**11)

    def test_enclosure_monotone(self):
        x = Interval(Fraction(1, 4), Fraction(1, 2))
        iv = acos_of_enclosure(x, Fraction(1, 10**9))
        a = acos_interval(Fraction(1, 2), Fraction(1, 10**9))
        b = acos_interval(Fraction(1, 4), Fraction(1, 10**9))
        assert iv.lo <= a.lo and b.hi <= iv.hi


class TestCertifiedReal:
    def test_arith(self):
        a = CertifiedReal(Fraction(1, 3), Fraction(1, 100))
        b = CertifiedReal(Fraction(2, 3), Fraction(1, 200))
        c = a + b
        assert c.midpoint == 1 and c.radius == Fraction(3, 200)
        assert (a - a).contains(0)
        assert a.scale(-2).midpoint == Fraction(-2, 3)

    def test_decimal_str(self):
        x = CertifiedReal(Fraction(-4, 3), Fraction(1, 10**9))
        assert x.decimal_str(9) == "-1.333333333"
        assert CertifiedReal.exact(0).decimal_str(3) == "0.000"

    def test_excludes_zero(self):
        assert CertifiedReal(Fraction(1, 10), Fraction(1, 100)).excludes_zero()
        assert not CertifiedReal(Fraction(1, 100), Fraction(1, 10)).excludes_zero()
