import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from compositum.affine import (
    AffineGerm,
    FlowGerm,
    ZModule,
    affine_word,
    flow_compose,
    flow_flatten,
    flow_invert,
    is_formally_discrete_standard,
    standard_generators,
    translation_lattice,
    zmodule_discreteness,
)
from compositum.cyclo import CycloNum, zeta


def C(x):
    return CycloNum.from_rational(Fraction(x))


class TestAffineGroup:
    def test_composition_example(self):
        # (eps, 0) o (delta, delta-1) with eps = delta = -1 gives z + 2
        eps = C(-1)
        a = AffineGerm(eps, C(0))
        b = AffineGerm(eps, eps - 1)
        ab = a.compose(b)
        assert ab.linear == CycloNum.one()
        assert ab.shift == C(2)

    def test_inverse(self):
        a = AffineGerm(zeta(6), zeta(6) - 1)
        assert a.compose(a.invert()).is_identity()
        assert a.invert().compose(a).is_identity()

    def test_zeta6_example(self):
        w = zeta(6)
        a = AffineGerm(w, w - 1)
        b = AffineGerm(w * w, C(0))
        ab = a.compose(b)
        assert ab.linear == w ** 3 == C(-1)
        assert ab.shift == w - 1

    def test_word(self):
        hp, hq, _ = standard_generators(2, 2)
        g = affine_word([hp, hq], [2, 1])  # hq o hp
        assert g.linear.is_one() and g.shift == C(-2)
        g = affine_word([hp, hq], [1, -1])
        assert g.is_identity()

    def test_rejects_non_root_linear(self):
        with pytest.raises(ValueError):
            AffineGerm(C(2), C(0))


class TestZModule:
    def test_rank_one(self):
        m = ZModule(1, [C(2)])
        assert m.rank == 1
        assert m.contains(C(4)) and m.contains(C(-2))
        assert not m.contains(C(1))
        v = zmodule_discreteness(m)
        assert v.discrete and v.rank == 1

    def test_gaussian_integers(self):
        m = ZModule(4, [CycloNum.one(), zeta(4)])
        v = zmodule_discreteness(m)
        assert v.discrete and v.rank == 2
        assert m.contains(3 + 2 * zeta(4))
        assert not m.contains(zeta(4) / 2)

    def test_fifth_roots_rank_four(self):
        gens = [zeta(5) ** k - 1 for k in range(1, 5)]
        m = ZModule(5, gens)
        v = zmodule_discreteness(m)
        assert v.rank == 4 and not v.discrete

    def test_real_ratio_not_discrete(self):
        # <1, sqrt(2)> inside Q(zeta_8): sqrt(2) = zeta_8 + zeta_8^-1
        s2 = zeta(8) + zeta(8).conjugate()
        m = ZModule(8, [CycloNum.one(), s2])
        v = zmodule_discreteness(m)
        assert v.rank == 2 and not v.discrete

    def test_index(self):
        zi = ZModule(4, [CycloNum.one(), zeta(4)])
        sub = ZModule(4, [C(3), 3 * zeta(4)])
        assert zi.index_of_sublattice(sub) == 9


class TestTranslationLattice:
    def test_2_2(self):
        m = translation_lattice(2, 2, 6)
        assert m.rank == 1
        assert m.contains(C(2)) and not m.contains(C(1))

    def test_4_4(self):
        m = translation_lattice(4, 4)
        assert m.rank == 2
        i = zeta(4)
        assert m.contains(i - 1)
        assert m.contains(C(-2))
        # 2 = (i-1)(-1-i)
        assert (i - 1) * (-1 - i) == C(2)
        assert m == ZModule(4, [(i - 1), (i - 1) * i])

    def test_5_5(self):
        m = translation_lattice(5, 5, 6)
        assert m.rank == 4

    def test_multiplicative_invariance(self):
        for n, mm in [(2, 3), (4, 4), (3, 6), (5, 5), (2, 6)]:
            mod = translation_lattice(n, mm, 6)
            d = math.lcm(n, mm)
            eps = CycloNum.zeta_power(d, d // n)
            delta = CycloNum.zeta_power(d, d // mm)
            assert mod.scaled(eps) == mod
            assert mod.scaled(delta) == mod

    def test_word_bound_stability(self):
        for n in range(2, 9):
            for m in range(2, 9):
                assert translation_lattice(n, m, 6) == translation_lattice(n, m, 10)


class TestFormalDiscreteness:
    def test_grid(self):
        for n in range(2, 13):
            for m in range(2, 13):
                want = math.lcm(n, m) in {2, 3, 4, 6}
                assert is_formally_discrete_standard(n, m) == want

    def test_examples(self):
        assert is_formally_discrete_standard(2, 3) is True
        assert is_formally_discrete_standard(4, 4) is True
        assert is_formally_discrete_standard(5, 5) is False


class TestFlowGroup:
    def test_identity(self):
        e = FlowGerm.identity(3)
        g = FlowGerm(3, zeta(6), C(5))
        assert flow_compose(e, g) == g
        assert flow_compose(g, e) == g

    def test_inverse(self):
        g = FlowGerm(4, zeta(6), zeta(3) + 2)
        assert flow_compose(g, flow_invert(g)).is_identity()
        # the closed form (lambda^-1, -t lambda^-k)
        inv = flow_invert(g)
        assert inv.scale == zeta(6).inverse()
        assert inv.time == -(g.time * zeta(6).inverse() ** 4)

    def test_center(self):
        k = 3
        lam = zeta(3)  # lambda^k = 1
        g = FlowGerm(k, lam, C(0))
        for other in [FlowGerm(k, zeta(6), C(2)), FlowGerm(k, C(-1), zeta(4))]:
            assert flow_compose(g, other) == flow_compose(other, g)
        h = FlowGerm(k, zeta(6), C(0))  # zeta(6)^3 = -1 != 1
        other = FlowGerm(k, C(1), C(1))
        assert flow_compose(h, other) != flow_compose(other, h)

    @given(
        i=st.integers(0, 5), j=st.integers(0, 5), l=st.integers(0, 5),
        t=st.integers(-3, 3), s=st.integers(-3, 3), u=st.integers(-3, 3),
    )
    @settings(max_examples=40, deadline=None)
    def test_associative(self, i, j, l, t, s, u):
        k = 5
        z6 = zeta(6)
        a = FlowGerm(k, z6 ** i, C(t))
        b = FlowGerm(k, z6 ** j, C(s))
        c = FlowGerm(k, z6 ** l, C(u))
        assert flow_compose(flow_compose(a, b), c) == flow_compose(a, flow_compose(b, c))

    def test_flatten(self):
        # identity-scale elements are fixed
        a = FlowGerm(5, C(1), C(7))
        assert flow_flatten(a, 6) == FlowGerm(1, C(1), C(7))
        # d=4, k=3: (i, t) -> (-i, t)
        a = FlowGerm(3, zeta(4), C(2))
        out = flow_flatten(a, 4)
        assert out.k == 1 and out.scale == zeta(4) ** 3 and out.time == C(2)
        with pytest.raises(ValueError):
            flow_flatten(FlowGerm(3, zeta(6), C(0)), 6)  # gcd(6,3) != 1

    def test_flatten_homomorphism_and_bijection(self):
        # G_6(5): scales are 6th roots; gcd(6,5)=1
        k, d = 5, 6
        z6 = zeta(6)
        elems = [FlowGerm(k, z6 ** i, C(t)) for i in range(6) for t in range(-2, 3)]
        import random

        rng = random.Random(7)
        for _ in range(100):
            a, b = rng.choice(elems), rng.choice(elems)
            lhs = flow_flatten(flow_compose(a, b), d)
            rhs = flow_compose(flow_flatten(a, d), flow_flatten(b, d))
            assert lhs == rhs
        images = {(flow_flatten(e, d).scale.root_of_unity_log(), str(flow_flatten(e, d).time)) for e in elems}
        assert len(images) == len(elems)

    def test_finite_order_forces_central(self):
        # in the level-k group with lambda^k = 1 and t != 0, no power <= 24 is trivial
        k = 4
        lam = zeta(4)  # lambda^4 = 1
        g = FlowGerm(k, lam, C(3))
        cur = g
        for _ in range(24):
            assert not cur.is_identity()
            cur = flow_compose(cur, g)
