"""Exact truncated Laurent series over cyclotomic fields.

A Window stores den^{-1} * sum_i vecs[i] * z^(top - i), where each vecs[i] is
an integer coordinate vector in the power basis of Q(zeta_order).  Every
stored slot is exact.  ``exact_tail`` marks windows that are finite Laurent
polynomials (all coefficients below the window are exactly zero); for those,
arithmetic keeps full precision instead of truncating.

Multiplication packs both operands into single big integers (Kronecker
substitution over the slot/basis grid) so the O(W^2 * phi^2) coefficient work
runs inside one CPython bigint multiply.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .cyclo import CycloNum, euler_phi, reduce_int_product

_INF = float("inf")


def _content(den: int, vecs) -> int:
    g = den
    for row in vecs:
        for x in row:
            if x:
                g = math.gcd(g, x)
                if g == 1:
                    return 1
    return g


class Window:
    __slots__ = ("order", "top", "den", "vecs", "exact_tail")

    def __init__(self, order: int, top: int, den: int, vecs, exact_tail: bool):
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.order = order
        self.top = top
        self.den = den
        self.vecs = list(vecs)
        self.exact_tail = exact_tail

    # -- basic geometry ----------------------------------------------------

    @property
    def width(self) -> int:
        return len(self.vecs)

    @property
    def bottom(self) -> int:
        return self.top - self.width + 1

    def is_zero(self) -> bool:
        return all(not any(v) for v in self.vecs)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(order: int, exact_tail: bool = True) -> "Window":
        return Window(order, 0, 1, [(0,) * euler_phi(order)], exact_tail)

    @staticmethod
    def from_items(order: int, items, exact_tail: bool, width: int | None = None) -> "Window":
        """Build from (z-exponent, CycloNum) pairs."""
        items = [(e, c) for e, c in items if not c.is_zero()]
        if not items:
            return Window.zero(order, exact_tail)
        top = max(e for e, _ in items)
        bot = min(e for e, _ in items)
        if width is not None:
            bot = min(bot, top - width + 1)
        phi = euler_phi(order)
        den = 1
        fracs = {}
        for e, c in items:
            coeffs = c.lifted_coeffs(order)
            fracs[e] = coeffs
            for q in coeffs:
                den = den * q.denominator // math.gcd(den, q.denominator)
        vecs = []
        for e in range(top, bot - 1, -1):
            if e in fracs:
                vecs.append(tuple(int(q * den) for q in fracs[e]))
            else:
                vecs.append((0,) * phi)
        return Window(order, top, den, vecs, exact_tail).normalized()

    # -- maintenance ---------------------------------------------------------

    def normalized(self) -> "Window":
        g = _content(self.den, self.vecs)
        if g <= 1:
            return self
        return Window(
            self.order,
            self.top,
            self.den // g,
            [tuple(x // g for x in row) for row in self.vecs],
            self.exact_tail,
        )

    def lift_order(self, m: int) -> "Window":
        if m == self.order:
            return self
        cyclos = [(self.top - i, self.cyclo_at_slot(i)) for i in range(self.width)]
        lifted = [(e, c.lift(m)) for e, c in cyclos]
        return Window.from_items(m, lifted, self.exact_tail, width=self.width)

    def clip(self, width: int) -> "Window":
        """Keep at most `width` slots from the top; drops exactness of the tail
        unless the dropped slots are all zero."""
        if width >= self.width:
            return self
        dropped_zero = all(not any(v) for v in self.vecs[width:])
        return Window(
            self.order,
            self.top,
            self.den,
            self.vecs[:width],
            self.exact_tail and dropped_zero,
        )

    def pad_to(self, width: int) -> "Window":
        """Extend with zero slots below; only meaningful for exact tails."""
        if width <= self.width:
            return self
        if not self.exact_tail:
            raise ValueError("cannot pad an inexact window")
        phi = euler_phi(self.order)
        return Window(
            self.order,
            self.top,
            self.den,
            self.vecs + [(0,) * phi] * (width - self.width),
            True,
        )

    def trimmed(self) -> "Window":
        """Drop leading zero slots (and trailing ones when the tail is exact)."""
        vecs = self.vecs
        lead = 0
        while lead < len(vecs) - 1 and not any(vecs[lead]):
            lead += 1
        tail = len(vecs)
        if self.exact_tail:
            while tail > lead + 1 and not any(vecs[tail - 1]):
                tail -= 1
        return Window(self.order, self.top - lead, self.den, vecs[lead:tail], self.exact_tail)

    # -- extraction ----------------------------------------------------------

    def cyclo_at_slot(self, i: int) -> CycloNum:
        return CycloNum(self.order, tuple(Fraction(x, self.den) for x in self.vecs[i]))

    def cyclo_at_exp(self, e: int) -> CycloNum:
        i = self.top - e
        if i < 0 or i >= self.width:
            phi = euler_phi(self.order)
            return CycloNum(self.order, (Fraction(0),) * phi)
        return self.cyclo_at_slot(i)

    def leading(self) -> CycloNum:
        return self.cyclo_at_slot(0)

    def canonical_key(self):
        w = self.normalized().trimmed()
        return (w.order, w.top, w.den, tuple(w.vecs), w.exact_tail)

    # -- linear operations -----------------------------------------------------

    def __neg__(self) -> "Window":
        return Window(
            self.order, self.top, self.den, [tuple(-x for x in r) for r in self.vecs], self.exact_tail
        )

    def add(self, other: "Window") -> "Window":
        a, b = self, other
        if a.order != b.order:
            m = math.lcm(a.order, b.order)
            a, b = a.lift_order(m), b.lift_order(m)
        top = max(a.top, b.top)
        if a.exact_tail and b.exact_tail:
            bottom = min(a.bottom, b.bottom)
            exact = True
        else:
            cands = []
            if not a.exact_tail:
                cands.append(a.bottom)
            if not b.exact_tail:
                cands.append(b.bottom)
            bottom = max(cands)
            exact = False
        if bottom > top:
            raise ValueError("windows do not overlap")
        phi = euler_phi(a.order)
        den = a.den * b.den // math.gcd(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        vecs = []
        for e in range(top, bottom - 1, -1):
            ia, ib = a.top - e, b.top - e
            ra = a.vecs[ia] if 0 <= ia < a.width else None
            rb = b.vecs[ib] if 0 <= ib < b.width else None
            if ra is None and rb is None:
                vecs.append((0,) * phi)
            elif rb is None:
                vecs.append(tuple(fa * x for x in ra))
            elif ra is None:
                vecs.append(tuple(fb * x for x in rb))
            else:
                vecs.append(tuple(fa * x + fb * y for x, y in zip(ra, rb)))
        return Window(a.order, top, den, vecs, exact).normalized()

    def sub(self, other: "Window") -> "Window":
        return self.add(-other)

    def shift_exp(self, k: int) -> "Window":
        return Window(self.order, self.top + k, self.den, self.vecs, self.exact_tail)

    def scale(self, c: CycloNum) -> "Window":
        if c.is_zero():
            return Window.zero(self.order, self.exact_tail)
        m = math.lcm(self.order, c.order)
        w = self.lift_order(m)
        coeffs = c.lifted_coeffs(m)
        den_c = 1
        for q in coeffs:
            den_c = den_c * q.denominator // math.gcd(den_c, q.denominator)
        cvec = tuple(int(q * den_c) for q in coeffs)
        if all(x == 0 for x in cvec[1:]):
            # rational scaling: no basis convolution needed
            vecs = [tuple(cvec[0] * x for x in r) for r in w.vecs]
            return Window(m, w.top, w.den * den_c, vecs, w.exact_tail).normalized()
        cw = Window(m, 0, den_c, [cvec], True)
        return w.mul(cw)

    def derivative(self) -> "Window":
        vecs = []
        for i, row in enumerate(self.vecs):
            e = self.top - i
            vecs.append(tuple(e * x for x in row))
        return Window(self.order, self.top - 1, self.den, vecs, self.exact_tail).normalized()

    # -- multiplication ----------------------------------------------------------

    def mul(self, other: "Window", max_width: int | None = None) -> "Window":
        a, b = self, other
        if a.order != b.order:
            m = math.lcm(a.order, b.order)
            a, b = a.lift_order(m), b.lift_order(m)
        order = a.order
        phi = euler_phi(order)
        wa, wb = a.width, b.width
        # exact width of the product
        if a.exact_tail and b.exact_tail:
            out_width = wa + wb - 1
            exact = True
        elif a.exact_tail:
            out_width = wb
            exact = False
        elif b.exact_tail:
            out_width = wa
            exact = False
        else:
            out_width = min(wa, wb)
            exact = False
        if max_width is not None and out_width > max_width:
            out_width = max_width
            exact = False if not (a.exact_tail and b.exact_tail) else exact
            # clipping an exact product: tail exactness is lost only if the
            # dropped slots could be nonzero; recompute cheaply by keeping flag
            if a.exact_tail and b.exact_tail and out_width < wa + wb - 1:
                exact = False
        slots = self._kron_mul(a, b, out_width, phi, order)
        out = Window(order, a.top + b.top, a.den * b.den, slots, exact)
        return out.normalized()

    @staticmethod
    def _kron_mul(a: "Window", b: "Window", out_width: int, phi: int, order: int):
        S = 2 * phi - 1
        max_a = max((abs(x) for r in a.vecs for x in r), default=0)
        max_b = max((abs(x) for r in b.vecs for x in r), default=0)
        if max_a == 0 or max_b == 0:
            return [(0,) * phi] * out_width
        terms = min(a.width, b.width) * phi
        bits = max_a.bit_length() + max_b.bit_length() + terms.bit_length() + 2
        pa = 0
        for i, row in enumerate(a.vecs):
            base = i * S
            for e, x in enumerate(row):
                if x:
                    pa += x << (bits * (base + e))
        pb = 0
        for i, row in enumerate(b.vecs):
            base = i * S
            for e, x in enumerate(row):
                if x:
                    pb += x << (bits * (base + e))
        prod = pa * pb
        n_raw = min(a.width + b.width - 1, out_width)
        mask = (1 << bits) - 1
        half = 1 << (bits - 1)
        slots = []
        for i in range(n_raw):
            conv = []
            for _ in range(S):
                r = prod & mask
                if r >= half:
                    r -= mask + 1
                prod = (prod - r) >> bits
                conv.append(r)
            slots.append(tuple(reduce_int_product(conv, order)))
        # remaining digits (slots beyond the kept window) are discarded
        if out_width > n_raw:
            slots.extend([(0,) * phi] * (out_width - n_raw))
        return slots

    # -- reciprocal / powers / roots --------------------------------------------

    def recip(self, width: int) -> "Window":
        """1/self, exact through `width` slots.  Needs an invertible lead slot
        and self known through at least `width` slots (or an exact tail).

        Newton iteration X <- X(2 - AX); intermediate iterates are treated as
        stored polynomials (their correctness-through-depth doubles each round)
        and only the final window is marked as truncated.
        """
        w = self.trimmed()
        lead = w.leading()
        if lead.is_zero():
            raise ZeroDivisionError("window has zero leading coefficient")
        if w.exact_tail and w.width == 1:
            # reciprocal of a monomial is exact
            return Window.from_items(w.order, [(-w.top, lead.inverse())], True)
        if not w.exact_tail and w.width < width:
            raise ValueError("insufficient precision for reciprocal")
        x = Window.from_items(w.order, [(-w.top, lead.inverse())], True)
        cur = 1
        two = Window.from_items(w.order, [(0, CycloNum.from_rational(2))], True)
        while cur < width:
            cur = min(2 * cur, width)
            aw = w if w.exact_tail else w.clip(cur)
            e = two.sub(aw.mul(x, max_width=cur).clip(cur))
            x = x.mul(e, max_width=cur).clip(cur)
            x = Window(x.order, x.top, x.den, x.vecs, True).normalized()
        out = x.clip(width)
        return Window(out.order, out.top, out.den, out.vecs, False)

    def npow(self, e: int, max_width: int | None = None) -> "Window":
        if e < 1:
            raise ValueError("npow needs e >= 1")
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result.mul(base, max_width=max_width)
            e >>= 1
            if e:
                base = base.mul(base, max_width=max_width)
        return result

    def nth_root(self, n: int, branch: CycloNum, width: int) -> "Window":
        """A window R with R^n = self through `width` slots.

        ``branch`` must satisfy branch^n = leading coefficient, and self.top
        must be divisible by n.  Newton iteration R <- R - (R^n - A)/(n R^(n-1)),
        with iterates treated as stored polynomials as in ``recip``.
        """
        a = self.trimmed()
        if a.top % n != 0:
            raise ValueError("top exponent must be divisible by n")
        if branch ** n != a.leading():
            raise ValueError("branch is not an n-th root of the leading coefficient")
        if n == 1:
            return a.clip(width)
        x = Window.from_items(a.order, [(a.top // n, branch)], True)
        cur = 1
        n_c = CycloNum.from_rational(n)
        while cur < width:
            cur = min(2 * cur, width)
            aw = a if a.exact_tail else a.clip(cur)
            xn1 = x.npow(n - 1, max_width=cur)
            xn = xn1.mul(x, max_width=cur)
            err = xn.sub(aw).clip(cur)
            if err.is_zero():
                continue
            corr = err.mul(xn1.scale(n_c).recip(cur), max_width=cur)
            x = x.sub(corr).clip(cur)
            x = Window(x.order, x.top, x.den, x.vecs, True).normalized()
        if x.exact_tail and a.exact_tail and x.npow(n).sub(a).is_zero():
            return x
        out = x.clip(width)
        return Window(out.order, out.top, out.den, out.vecs, False)

    # -- composition helpers -----------------------------------------------------

    def compose_poly(self, coeffs: list[CycloNum], width: int) -> "Window":
        """Evaluate sum_j coeffs[j] * self^j (coeffs low degree first) by Horner."""
        order = self.order
        for c in coeffs:
            order = math.lcm(order, c.order)
        h = self.lift_order(order)
        acc = Window.from_items(order, [(0, coeffs[-1].lift(order))], True)
        for c in reversed(coeffs[:-1]):
            acc = acc.mul(h, max_width=width)
            if not c.is_zero():
                acc = acc.add(Window.from_items(order, [(0, c.lift(order))], True))
            acc = acc.clip(width)
        return acc

    def __repr__(self):
        parts = []
        for i in range(min(self.width, 8)):
            c = self.cyclo_at_slot(i)
            if not c.is_zero():
                parts.append(f"({c})z^{self.top - i}")
        tail = "" if self.exact_tail else " + ..."
        return "Window[" + " + ".join(parts or ["0"]) + tail + "]"
