"""Truncated formal germs at infinity.

A germ is a series g(z) = a_1 z + a_0 + a_{-1} z^{-1} + ... with a_1 != 0 and
exact cyclotomic coefficients, truncated to the exponents 1, 0, ..., 1-K.
These model the group of formal diffeomorphisms fixing infinity, with its
filtration by the order of contact with the identity.

Affine germs (zero tail) are recognized and composed by the closed affine
formula; only honestly infinite germs go through windowed series arithmetic.
The default truncation K comes from the COMPOSITUM_TRUNC environment variable
(64 when unset).  Values are immutable and all operations pure.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Mapping, Union

from ._series import Window
from .cyclo import CycloNum
from .errors import TruncationInconclusive, UnsupportedCoefficient

OUTSIDE_J1 = "outside-J1"


def default_trunc_order() -> int:
    try:
        return max(4, int(os.environ.get("COMPOSITUM_TRUNC", "64")))
    except ValueError:
        return 64


def _as_cyclo(x) -> CycloNum:
    return x if isinstance(x, CycloNum) else CycloNum.from_rational(Fraction(x))


class Germ:
    """g(z) = a_1 z + a_0 + a_{-1}/z + ..., truncated after K terms below a_1."""

    __slots__ = ("window", "trunc_order")

    def __init__(self, window: Window, trunc_order: int):
        if window.top != 1:
            window = _rebase_to_top_one(window)
        lead = window.leading()
        if lead.is_zero():
            raise ValueError("germ needs a nonzero linear coefficient")
        if not window.exact_tail and window.width < trunc_order + 1:
            raise ValueError("window narrower than the declared truncation")
        self.window = window.clip(trunc_order + 1).normalized()
        self.trunc_order = trunc_order

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_coeffs(
        coeffs: Mapping[int, Union[int, Fraction, CycloNum]],
        trunc_order: int | None = None,
        exact_tail: bool = True,
    ) -> "Germ":
        """Build from a map {z-exponent: coefficient}, exponents <= 1."""
        K = default_trunc_order() if trunc_order is None else trunc_order
        items = []
        order = 1
        for e, c in coeffs.items():
            if e > 1:
                raise ValueError("germ exponents must be <= 1")
            c = _as_cyclo(c)
            order = math.lcm(order, c.order)
            items.append((e, c))
        items = [(e, c.lift(order)) for e, c in items]
        win = Window.from_items(order, items, exact_tail, width=None)
        return Germ(win, K)

    @staticmethod
    def identity(trunc_order: int | None = None) -> "Germ":
        return Germ.from_coeffs({1: 1}, trunc_order)

    @staticmethod
    def affine(linear, shift, trunc_order: int | None = None) -> "Germ":
        return Germ.from_coeffs({1: linear, 0: shift}, trunc_order)

    # -- accessors -----------------------------------------------------------

    @property
    def order(self) -> int:
        return self.window.order

    def coeff(self, e: int) -> CycloNum:
        if e > 1 or (e < 1 - self.trunc_order and not self.window.exact_tail):
            raise IndexError(f"exponent {e} outside the truncation window")
        return self.window.cyclo_at_exp(e)

    def is_affine(self) -> bool:
        w = self.window.trimmed()
        return w.exact_tail and w.bottom >= 0

    def linear_part(self) -> CycloNum:
        return self.window.leading()

    def shift_part(self) -> CycloNum:
        return self.window.cyclo_at_exp(0)

    def key(self):
        """Hashable canonical key (windows compared at a common order)."""
        return self.window.canonical_key() + (self.trunc_order,)

    def __eq__(self, other):
        if not isinstance(other, Germ):
            return NotImplemented
        if self.trunc_order != other.trunc_order:
            raise ValueError("germ equality requires equal truncation orders")
        a, b = self.window, other.window
        if a.order != b.order:
            m = math.lcm(a.order, b.order)
            a, b = a.lift_order(m), b.lift_order(m)
        return a.sub(b).is_zero()

    def __hash__(self):
        # hash only on the exact affine part; full comparison goes via __eq__
        return hash((self.trunc_order, self.linear_part(), self.shift_part()))

    def __repr__(self):
        return f"Germ({self.window!r}, K={self.trunc_order})"

    # -- group operations ------------------------------------------------------

    def compose(self, other: "Germ") -> "Germ":
        """self after other: (self о other)(z) = self(other(z))."""
        if self.trunc_order != other.trunc_order:
            raise ValueError("composition requires equal truncation orders")
        K = self.trunc_order
        if self.is_affine() and other.is_affine():
            a1, a0 = self.linear_part(), self.shift_part()
            b1, b0 = other.linear_part(), other.shift_part()
            return Germ.affine(a1 * b1, a1 * b0 + a0, K)
        g = self.window
        h = other.window
        if g.order != h.order:
            m = math.lcm(g.order, h.order)
            g, h = g.lift_order(m), h.lift_order(m)
        win = _compose_windows(g, h, K + 1)
        return Germ(win, K)

    def invert(self) -> "Germ":
        """Compositional inverse within the truncation window."""
        K = self.trunc_order
        if self.is_affine():
            a1, a0 = self.linear_part(), self.shift_part()
            inv = a1.inverse()
            return Germ.affine(inv, -(a0 * inv), K)
        width = K + 1
        a1 = self.linear_part()
        a0 = self.shift_part()
        inv = a1.inverse()
        x = Window.from_items(self.order, [(1, inv), (0, -(a0 * inv))], True)
        g = self.window
        dg = g.derivative()
        ident = Window.from_items(self.order, [(1, CycloNum.one())], True)
        cur = 2
        while cur < width:
            cur = min(2 * cur, width)
            err = _compose_windows(g, x, cur).sub(ident).clip(cur)
            if err.is_zero():
                continue
            dgx = _compose_windows(dg, x, cur)
            x = x.sub(err.mul(dgx.recip(cur), max_width=cur)).clip(cur)
            x = Window(x.order, x.top, x.den, x.vecs, True).normalized()
        if not x.exact_tail or not self.window.exact_tail:
            x = Window(x.order, x.top, x.den, x.vecs[:width], False)
        else:
            chk = _compose_windows(self.window, x, width)
            if not chk.sub(ident).is_zero() or not chk.exact_tail:
                x = Window(x.order, x.top, x.den, x.vecs[:width], False)
        return Germ(x, K)

    def substitute_root(self, n: int) -> "Germ":
        """Lift through the degree-n covering written as z = zeta^n.

        Returns the germ r with r(zeta)^n = self(zeta^n) through the window,
        using the canonical branch for the n-th root of the leading
        coefficient (which must be a root of unity).
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        if n == 1:
            return self
        K = self.trunc_order
        lead = self.linear_part()
        log = lead.root_of_unity_log()
        if log is None:
            raise UnsupportedCoefficient(
                "root substitution needs a root-of-unity leading coefficient"
            )
        big_n, j = log
        branch = CycloNum.zeta_power(n * big_n, j)
        w = self.window
        m = math.lcm(w.order, n * big_n)
        w = w.lift_order(m)
        stretched = Window.from_items(
            m,
            [(n * (w.top - i), w.cyclo_at_slot(i)) for i in range(w.width)],
            w.exact_tail,
        )
        root = stretched.nth_root(n, branch.lift(m), K + 1)
        return Germ(root, K)

    def sub_identity(self) -> "LaurentTail":
        """The tail g(z) - z, used by the filtration."""
        ident = Window.from_items(self.order, [(1, CycloNum.one())], True)
        return LaurentTail(self.window.sub(ident))


def _rebase_to_top_one(win: Window) -> Window:
    """Pad or trim a window so its top slot is the z^1 coefficient."""
    if win.top < 1:
        if not win.exact_tail:
            raise ValueError("germ window must include the linear term")
        items = [(win.top - i, win.cyclo_at_slot(i)) for i in range(win.width)]
        items.append((1, CycloNum.zero()))
        out = Window.from_items(win.order, items, True)
        if out.top != 1:  # all-zero coefficients above
            raise ValueError("germ needs a nonzero linear coefficient")
        return out
    lead = 0
    while win.top - lead > 1:
        if any(win.vecs[lead]):
            raise ValueError("germ window has terms above z^1")
        lead += 1
    return Window(win.order, 1, win.den, win.vecs[lead:], win.exact_tail)


def _compose_windows(g: Window, h: Window, width: int) -> Window:
    """sum_j g_j h(z)^j over the exponents stored in g (h a germ window)."""
    order = g.order
    acc = Window.zero(order)
    # polynomial part: exponents g.top .. 0 by Horner
    if g.top >= 0:
        poly = [g.cyclo_at_exp(e) for e in range(0, g.top + 1)]
        if len(poly) == 1:
            acc = Window.from_items(order, [(0, poly[0])], True)
        else:
            acc = h.compose_poly(poly, width)
    tail_exps = [e for e in range(min(-1, g.bottom), g.bottom - 1, -1)] if g.bottom < 0 else []
    if g.bottom < 0 and (not g.exact_tail or any(
        not g.cyclo_at_exp(e).is_zero() for e in range(g.bottom, 0)
    )):
        hinv = h.recip(width)
        p = hinv
        for e in range(-1, g.bottom - 1, -1):
            c = g.cyclo_at_exp(e)
            if not c.is_zero():
                acc = acc.add(p.scale(c)).clip(width)
            if e > g.bottom:
                p = p.mul(hinv, max_width=width)
        if not g.exact_tail:
            # coefficients of g below the window are unknown; they affect
            # exponents <= g.bottom * (h leading exponent 1) ... conservative:
            acc = acc.clip(width)
            acc = Window(acc.order, acc.top, acc.den, acc.vecs, False)
    return acc.clip(width)


class LaurentTail:
    """A truncated series sum_{k >= n} a_k z^{-k} with its order at infinity."""

    __slots__ = ("window",)

    def __init__(self, window: Window):
        self.window = window

    @staticmethod
    def from_coeffs(coeffs: Mapping[int, Union[int, Fraction, CycloNum]],
                    exact_tail: bool = True) -> "LaurentTail":
        """Build from a map {z-exponent: coefficient}."""
        items = []
        order = 1
        for e, c in coeffs.items():
            c = _as_cyclo(c)
            order = math.lcm(order, c.order)
            items.append((e, c))
        items = [(e, c.lift(order)) for e, c in items]
        return LaurentTail(Window.from_items(order, items, exact_tail))

    def ord_infinity(self) -> int:
        """Least k with a nonzero z^{-k} coefficient (z itself has order -1)."""
        w = self.window
        for i in range(w.width):
            if any(w.vecs[i]):
                return -(w.top - i)
        if w.exact_tail:
            raise ValueError("ord_infinity of the zero tail is undefined")
        raise TruncationInconclusive(
            "tail vanishes through the truncation window"
        )

    def leading_coeff(self) -> CycloNum:
        w = self.window
        for i in range(w.width):
            if any(w.vecs[i]):
                return w.cyclo_at_slot(i)
        raise ValueError("zero tail has no leading coefficient")


def ord_infinity(t: LaurentTail) -> int:
    return t.ord_infinity()


def level(g: Germ):
    """The filtration level: the unique k <= 1 with ord(g(z)-z) = 1-k.

    Returns OUTSIDE_J1 when the linear coefficient differs from 1.  The
    identity germ has no level (raises ValueError).
    """
    if not g.linear_part().is_one():
        return OUTSIDE_J1
    tail = g.sub_identity()
    try:
        n = tail.ord_infinity()
    except ValueError:
        raise ValueError("the identity germ has no level") from None
    return 1 - n


def residue(g: Germ) -> CycloNum:
    """Leading coefficient of g(z) - z: the image of g in the additive
    quotient of its filtration level."""
    lv = level(g)
    if lv == OUTSIDE_J1:
        raise ValueError("residue requires a germ with linear part 1")
    return g.sub_identity().leading_coeff()


def compose(g: Germ, h: Germ) -> Germ:
    return g.compose(h)


def invert(g: Germ) -> Germ:
    return g.invert()


def substitute_root(g: Germ, n: int) -> Germ:
    return g.substitute_root(n)
