import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from compositum.cyclo import (
    CycloNum,
    cyclotomic_polynomial,
    euler_phi,
    galois_average,
    mobius,
    roots_of_unity,
    zeta,
)


def approx_equal(x: CycloNum, y: CycloNum, tol=1e-12) -> bool:
    return abs(x.complex_approx() - y.complex_approx()) < tol


class TestBasics:
    def test_cyclotomic_polys(self):
        assert cyclotomic_polynomial(1) == (-1, 1)
        assert cyclotomic_polynomial(2) == (1, 1)
        assert cyclotomic_polynomial(3) == (1, 1, 1)
        assert cyclotomic_polynomial(4) == (1, 0, 1)
        assert cyclotomic_polynomial(6) == (1, -1, 1)
        assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)

    def test_zeta4_squared_is_minus_one(self):
        i = zeta(4)
        assert i * i == CycloNum.from_rational(-1)

    def test_cube_roots_sum(self):
        w = zeta(3)
        assert w + w * w == CycloNum.from_rational(-1)

    def test_zeta6_minus_zeta3_is_one(self):
        # zeta_6 = 1 + zeta_3 after lifting to order 6; checked exactly and
        # against the numeric embedding as an independent oracle.
        d = zeta(6) - zeta(3)
        assert d == CycloNum.one()
        assert abs(zeta(6).complex_approx() - (1 + zeta(3).complex_approx())) < 1e-12

    def test_primitive_root_identities(self):
        for n in (1, 2, 6):
            z = zeta(n)
            p = CycloNum.one()
            for _ in range(n):
                p = p * z
            assert p == CycloNum.one()
            for d in [d for d in range(1, n) if n % d == 0]:
                zd = CycloNum.one()
                for _ in range(d):
                    zd = zd * z
                assert zd != CycloNum.one()
        assert zeta(1) == CycloNum.one()
        assert zeta(2) == CycloNum.from_rational(-1)
        z6 = zeta(6)
        assert z6 ** 3 == CycloNum.from_rational(-1)
        assert z6 * z6 - z6 + 1 == CycloNum.zero()

    def test_inversion(self):
        x = zeta(12) + Fraction(1, 2)
        assert x * x.inverse() == CycloNum.one()
        with pytest.raises(ZeroDivisionError):
            CycloNum.zero().inverse()

    def test_root_of_unity_log(self):
        assert zeta(8).root_of_unity_log() == (8, 1)
        assert (-zeta(3)).root_of_unity_log() == (6, 5)
        assert (zeta(5) + 1).root_of_unity_log() is None
        assert CycloNum.from_rational(-1).root_of_unity_log() == (2, 1)


class TestNumberTheoryHelpers:
    def test_paper_values(self):
        assert mobius(6) == 1 and euler_phi(6) == 2
        assert mobius(4) == 0 and euler_phi(4) == 2
        assert mobius(1) == 1 and euler_phi(1) == 1
        assert euler_phi(3) == euler_phi(4) == euler_phi(6) == 2
        assert euler_phi(2) == 1

    def test_phi_gt_two_elsewhere(self):
        for m in range(1, 60):
            if m not in (1, 2, 3, 4, 6):
                assert euler_phi(m) > 2


class TestGaloisAverage:
    def test_rational_fixed(self):
        assert galois_average(CycloNum.one()) == 1
        assert galois_average(CycloNum.from_rational(Fraction(7, 3))) == Fraction(7, 3)

    def test_zeta6(self):
        # (zeta_6 + zeta_6^5)/2 = cos(pi/3) = 1/2 = mobius(6)/phi(6)
        assert galois_average(zeta(6)) == Fraction(1, 2)
        assert galois_average(zeta(6)) == Fraction(mobius(6), euler_phi(6))

    def test_zeta5(self):
        assert galois_average(zeta(5)) == Fraction(-1, 4)
        assert galois_average(zeta(5)) == Fraction(mobius(5), euler_phi(5))

    def test_matches_mobius_over_phi_everywhere(self):
        for m in range(1, 101):
            want = Fraction(mobius(m), euler_phi(m))
            assert galois_average(zeta(m)) == want

    def test_all_primitive_roots_small_orders(self):
        for m in range(1, 46):
            want = Fraction(mobius(m), euler_phi(m))
            for a in range(1, m + 1):
                if math.gcd(a, m) == 1:
                    assert galois_average(CycloNum.zeta_power(m, a)) == want

    def test_odd_order_bounds(self):
        for m in range(3, 46, 2):
            t = galois_average(zeta(m))
            assert Fraction(-1, 2) <= t < Fraction(1, 2)

    @given(
        a=st.fractions(max_denominator=20),
        b=st.fractions(max_denominator=20),
        i=st.integers(1, 11),
        j=st.integers(1, 11),
    )
    @settings(max_examples=60, deadline=None)
    def test_q_linearity(self, a, b, i, j):
        x = CycloNum.zeta_power(12, i)
        y = CycloNum.zeta_power(12, j) + 1
        lhs = galois_average(a * x + b * y)
        rhs = a * galois_average(x) + b * galois_average(y)
        assert lhs == rhs

    def test_order_independence(self):
        # T restricted to a subfield agrees with the subfield's own average
        x = zeta(6)
        assert galois_average(x.lift(12)) == galois_average(x)
        assert galois_average(x.lift(24)) == galois_average(x)


class TestLiftingInvariance:
    @given(
        i=st.integers(0, 11),
        j=st.integers(0, 11),
        q=st.fractions(max_denominator=12),
    )
    @settings(max_examples=60, deadline=None)
    def test_even_lift(self, i, j, q):
        x = CycloNum.zeta_power(12, i) + q
        y = CycloNum.zeta_power(12, j) - 1
        at_n = x * y + x - y
        at_2n = x.lift(24) * y.lift(24) + x.lift(24) - y.lift(24)
        assert at_n == at_2n

    def test_cross_order_equality(self):
        assert CycloNum.zeta_power(6, 2) == zeta(3)
        assert CycloNum.zeta_power(12, 4) == zeta(3)
        assert zeta(3) != zeta(4)


class TestFieldAxioms:
    nums = st.builds(
        lambda i, q: CycloNum.zeta_power(8, i) + q,
        st.integers(0, 7),
        st.fractions(min_value=-20, max_value=20, max_denominator=8),
    )

    @given(x=nums, y=nums, z=nums)
    @settings(max_examples=40, deadline=None)
    def test_ring_axioms(self, x, y, z):
        assert (x + y) * z == x * z + y * z
        assert (x * y) * z == x * (y * z)
        assert x + y == y + x

    @given(x=nums)
    @settings(max_examples=40, deadline=None)
    def test_inverse_roundtrip(self, x):
        if not x.is_zero():
            assert x * x.inverse() == CycloNum.one()

    @given(x=nums)
    @settings(max_examples=30, deadline=None)
    def test_float_embedding_consistency(self, x):
        y = x * x - 3 * x + Fraction(1, 2)
        expected = x.complex_approx() ** 2 - 3 * x.complex_approx() + 0.5
        assert abs(y.complex_approx() - expected) < 1e-9


class TestHashing:
    def test_hash_consistent_across_orders(self):
        a = zeta(3)
        b = CycloNum.zeta_power(6, 2)
        assert a == b and hash(a) == hash(b)
        s = {a, b, zeta(4)}
        assert len(s) == 2

    def test_roots_of_unity_listing(self):
        rs = roots_of_unity(6)
        assert len(set(rs)) == 6
        for r in rs:
            assert r ** 6 == CycloNum.one()
