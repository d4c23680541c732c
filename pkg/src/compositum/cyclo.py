"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis {zeta_N^i : 0 <= i < phi(N)} modulo the
N-th cyclotomic polynomial, with rational coordinates.  Mixed-order operands
are lifted eagerly to the field of order lcm(N, M); equality across orders is
decided after such a lift.  All operations are pure and all values immutable,
so the type is safe to share between threads.

A floating-point embedding (``complex_approx``) is provided for test oracles
and numeric demos only; no decision in this package is based on it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, "CycloNum"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def euler_phi(m: int) -> int:
    """Euler totient of m >= 1."""
    if m < 1:
        raise ValueError("euler_phi requires m >= 1")
    out = m
    d = 2
    n = m
    while d * d <= n:
        if n % d == 0:
            out -= out // d
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out -= out // n
    return out


def mobius(m: int) -> int:
    """Moebius function of m >= 1."""
    if m < 1:
        raise ValueError("mobius requires m >= 1")
    out = 1
    d = 2
    n = m
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def divisors(m: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
        d += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, low degree first, monic."""
    if n == 1:
        return (-1, 1)
    # (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact integer division.
    num = [0] * (n + 1)
    num[0] = -1
    num[n] = 1
    for d in divisors(n)[:-1]:
        den = list(cyclotomic_polynomial(d))
        # long division, quotient replaces num
        deg_den = len(den) - 1
        deg_num = len(num) - 1
        quot = [0] * (deg_num - deg_den + 1)
        rem = list(num)
        for k in range(deg_num - deg_den, -1, -1):
            c = rem[deg_den + k]
            if c:
                quot[k] = c
                for j, dj in enumerate(den):
                    rem[j + k] -= c * dj
        if any(rem):
            raise AssertionError("cyclotomic division must be exact")
        num = quot
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_row(n: int) -> tuple[int, ...]:
    # x^phi(n) mod Phi_n, as an integer vector of length phi(n)
    poly = cyclotomic_polynomial(n)
    return tuple(-c for c in poly[:-1])


def _shift_reduce(vec: Sequence[int], n: int) -> tuple[int, ...]:
    # multiply by x modulo Phi_n (integer vectors)
    phi = len(vec)
    top = vec[phi - 1]
    out = [0] + list(vec[: phi - 1])
    if top:
        red = _reduction_row(n)
        for j in range(phi):
            if red[j]:
                out[j] += top * red[j]
    return tuple(out)


@lru_cache(maxsize=None)
def zeta_power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """zeta_n^j mod Phi_n for 0 <= j < n, as integer coordinate vectors."""
    phi = euler_phi(n)
    row = tuple([1] + [0] * (phi - 1))
    rows = [row]
    for _ in range(n - 1):
        row = _shift_reduce(row, n)
        rows.append(row)
    return tuple(rows)


@lru_cache(maxsize=None)
def _high_power_rows(n: int) -> tuple[tuple[int, ...], ...]:
    # x^k mod Phi_n for phi(n) <= k <= 2 phi(n) - 2 (used to reduce products)
    phi = euler_phi(n)
    rows = []
    row = _reduction_row(n)
    rows.append(row)
    for _ in range(phi - 2):
        row = _shift_reduce(row, n)
        rows.append(row)
    return tuple(rows)


def reduce_int_product(conv: list, n: int) -> list:
    """Reduce a raw convolution (length <= 2*phi-1) modulo Phi_n in place."""
    phi = euler_phi(n)
    if len(conv) <= phi:
        return conv + [0] * (phi - len(conv))
    high = _high_power_rows(n)
    for d in range(len(conv) - 1, phi - 1, -1):
        c = conv[d]
        if c:
            row = high[d - phi]
            for j in range(phi):
                if row[j]:
                    conv[j] += c * row[j]
    return conv[:phi]


class CycloNum:
    """An exact element of Q(zeta_order) in the power basis mod Phi_order."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs: Iterable[Fraction]):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if order < 1:
            raise ValueError("order must be >= 1")
        if len(coeffs) != euler_phi(order):
            raise ValueError(
                f"need phi({order}) = {euler_phi(order)} coordinates, got {len(coeffs)}"
            )
        self.order = order
        self.coeffs = coeffs
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(q) -> "CycloNum":
        return CycloNum(1, (Fraction(q),))

    @staticmethod
    def zero() -> "CycloNum":
        return CycloNum(1, (_ZERO,))

    @staticmethod
    def one() -> "CycloNum":
        return CycloNum(1, (_ONE,))

    @staticmethod
    def zeta_power(n: int, j: int) -> "CycloNum":
        row = zeta_power_table(n)[j % n]
        return CycloNum(n, tuple(Fraction(r) for r in row))

    # -- representation maintenance ---------------------------------------

    def lifted_coeffs(self, m: int) -> tuple[Fraction, ...]:
        """Coordinates of self inside Q(zeta_m); requires order | m."""
        n = self.order
        if m == n:
            return self.coeffs
        if m % n != 0:
            raise ValueError(f"cannot lift order {n} into order {m}")
        rows = zeta_power_table(m)
        out = [_ZERO] * euler_phi(m)
        step = m // n
        for i, c in enumerate(self.coeffs):
            if c:
                row = rows[(i * step) % m]
                for j in range(len(out)):
                    if row[j]:
                        out[j] += c * row[j]
        return tuple(out)

    def lift(self, m: int) -> "CycloNum":
        return CycloNum(m, self.lifted_coeffs(m))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x: Scalar) -> "CycloNum":
        if isinstance(x, CycloNum):
            return x
        if isinstance(x, (int, Fraction)):
            return CycloNum(1, (Fraction(x),))
        return NotImplemented  # type: ignore[return-value]

    def _pair(self, other: "CycloNum"):
        if self.order == other.order:
            return self.order, self.coeffs, other.coeffs
        m = math.lcm(self.order, other.order)
        return m, self.lifted_coeffs(m), other.lifted_coeffs(m)

    def __add__(self, other: Scalar) -> "CycloNum":
        other = CycloNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m, a, b = self._pair(other)
        return CycloNum(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Scalar) -> "CycloNum":
        other = CycloNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m, a, b = self._pair(other)
        return CycloNum(m, tuple(x - y for x, y in zip(a, b)))

    def __rsub__(self, other: Scalar) -> "CycloNum":
        return (-self).__add__(other)

    def __mul__(self, other: Scalar) -> "CycloNum":
        other = CycloNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.order == 1:
            q = other.coeffs[0]
            return CycloNum(self.order, tuple(c * q for c in self.coeffs))
        if self.order == 1:
            q = self.coeffs[0]
            return CycloNum(other.order, tuple(c * q for c in other.coeffs))
        m, a, b = self._pair(other)
        phi = len(a)
        conv = [_ZERO] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return CycloNum(m, tuple(reduce_int_product(conv, m)))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero cyclotomic number")
        if self.is_rational():
            return CycloNum(self.order, (1 / self.coeffs[0],) + self.coeffs[1:])
        # extended Euclid of the coordinate polynomial with Phi_order over Q
        n = self.order
        mod = [Fraction(c) for c in cyclotomic_polynomial(n)]
        a = list(self.coeffs)
        r0, r1 = mod, _trim(a)
        s0, s1 = [_ZERO], [_ONE]
        while _degree(r1) > 0:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if _degree(r1) < 0:
            raise ZeroDivisionError("not invertible (zero divisor?)")
        c = r1[0]
        inv = [x / c for x in s1]
        inv = inv[: euler_phi(n)] + [_ZERO] * max(0, euler_phi(n) - len(inv))
        # reduce in case degree crept above phi-1 (it cannot, but stay safe)
        conv = [Fraction(x) for x in inv]
        out = reduce_int_product(conv, n) if len(conv) > euler_phi(n) else conv
        out = list(out) + [_ZERO] * (euler_phi(n) - len(out))
        return CycloNum(n, tuple(out))

    def __truediv__(self, other: Scalar) -> "CycloNum":
        other = CycloNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> "CycloNum":
        return CycloNum._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "CycloNum":
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloNum.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- Galois action -----------------------------------------------------

    def galois_subst(self, a: int) -> "CycloNum":
        """Image under zeta_order -> zeta_order^a; requires gcd(a, order) = 1."""
        n = self.order
        if math.gcd(a, n) != 1:
            raise ValueError("galois_subst needs gcd(a, order) = 1")
        rows = zeta_power_table(n)
        out = [_ZERO] * euler_phi(n)
        for i, c in enumerate(self.coeffs):
            if c:
                row = rows[(i * a) % n]
                for j in range(len(out)):
                    if row[j]:
                        out[j] += c * row[j]
        return CycloNum(n, tuple(out))

    def conjugate(self) -> "CycloNum":
        """Complex conjugation zeta -> zeta^(-1)."""
        return self.galois_subst(self.order - 1) if self.order > 1 else self

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        other = CycloNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m, a, b = self._pair(other)
        return a == b

    def __hash__(self):
        if self._hash is None:
            # order-independent: the Galois average is compatible with lifts
            t1 = galois_average(self)
            t2 = galois_average(self * self)
            object.__setattr__(self, "_hash", hash((t1, t2)))
        return self._hash

    def __setattr__(self, name, value):
        if name in ("order", "coeffs") and hasattr(self, "coeffs"):
            raise AttributeError("CycloNum is immutable")
        object.__setattr__(self, name, value)

    # -- root-of-unity utilities --------------------------------------------

    def root_of_unity_log(self):
        """If self is a root of unity, return (N, j) with self = zeta_N^j.

        N is self.order (or 2*order when only -zeta^j matches).  Returns None
        when self is not a root of unity.
        """
        if self.is_zero():
            return None
        n = self.order
        rows = zeta_power_table(n)
        for j in range(n):
            row = rows[j]
            if all(c == r for c, r in zip(self.coeffs, row)):
                return (n, j)
        for j in range(n):
            row = rows[j]
            if all(c == -r for c, r in zip(self.coeffs, row)):
                # -zeta_n^j = zeta_{2n}^{n + 2j}
                return (2 * n, (n + 2 * j) % (2 * n))
        return None

    def is_root_of_unity(self) -> bool:
        return self.root_of_unity_log() is not None

    # -- numeric oracle ------------------------------------------------------

    def complex_approx(self) -> complex:
        """Float embedding zeta_N -> exp(2*pi*i/N).  Test/demo oracle only."""
        n = self.order
        out = 0j
        for i, c in enumerate(self.coeffs):
            if c:
                out += float(c) * complex(
                    math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)
                )
        return out

    # -- formatting ----------------------------------------------------------

    def __repr__(self):
        return f"CycloNum({self.order}, {list(self.coeffs)})"

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                z = f"zeta({self.order})" if i == 1 else f"zeta({self.order})^{i}"
                parts.append(f"{c}*{z}")
        return " + ".join(parts).replace("+ -", "- ")


def zeta(n: int) -> CycloNum:
    """The primitive n-th root of unity zeta_n = exp(2*pi*i/n), exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return CycloNum.zeta_power(n, 1 % n)


def roots_of_unity(n: int) -> list[CycloNum]:
    """All n-th roots of unity as elements of Q(zeta_n)."""
    return [CycloNum.zeta_power(n, j) for j in range(n)]


def galois_average(x: CycloNum) -> Fraction:
    """Average of x over Gal(Q(zeta_m)/Q), an exact rational.

    Computed by summing the images of x under every substitution
    zeta_m -> zeta_m^a with gcd(a, m) = 1 and dividing by phi(m).  On a
    primitive m-th root of unity this equals mobius(m)/euler_phi(m); the value
    does not depend on the order used to represent x.
    """
    m = x.order
    if m == 1:
        return x.coeffs[0]
    phi = euler_phi(m)
    rows = zeta_power_table(m)
    acc = [_ZERO] * phi
    for a in range(1, m + 1):
        if math.gcd(a, m) != 1:
            continue
        for i, c in enumerate(x.coeffs):
            if c:
                row = rows[(i * a) % m]
                for j in range(phi):
                    if row[j]:
                        acc[j] += c * row[j]
    if any(acc[1:]):
        raise AssertionError("Galois average must be rational")
    return acc[0] / phi


# -- small polynomial helpers over Q (used by inversion) ---------------------


def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _degree(p: list) -> int:
    return -1 if p == [_ZERO] or not any(p) else len(_trim(list(p))) - 1


def _poly_mul(a: list, b: list) -> list:
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [_ZERO] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = _trim(list(a))
    b = _trim(list(b))
    if _degree(b) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = [_ZERO] * max(1, len(a) - len(b) + 1)
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(r) - 1 >= db and any(r):
        dr = len(_trim(list(r))) - 1
        if dr < db:
            break
        c = r[dr] / lead
        q[dr - db] += c
        for j in range(db + 1):
            r[dr - db + j] -= c * b[j]
        r = _trim(r)
    return _trim(q), _trim(r)
