"""Exact affine germs z -> zeta*z + t and translation-lattice analysis.

The affine germs with a root-of-unity linear part model the deck groups of
the pure-power pairs (z^n, (z+1)^m) exactly.  The translations appearing in
the group they generate span a finitely generated additive subgroup of a
cyclotomic field; discreteness of that subgroup (rank <= 2 with generators
independent over the reals) is what decides formal discreteness for these
pairs, and is computed here by integer row reduction, never floating point.

Also contains the one-parameter scaled-flow groups: germs lambda * (time-t
flow of z^{k+1} d/dz) with multiplication (a,t)(b,s) = (ab, t b^k + s), and
the degree-flattening isomorphism used to reduce their level to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclo import CycloNum, euler_phi, zeta, zeta_power_table
from .errors import InvariantViolation

DISCRETE_ROTATION_ORDERS = frozenset({1, 2, 3, 4, 6})


def _as_cyclo(x) -> CycloNum:
    return x if isinstance(x, CycloNum) else CycloNum.from_rational(Fraction(x))


@dataclass(frozen=True)
class AffineGerm:
    """The germ z -> linear*z + shift with linear a root of unity."""

    linear: CycloNum
    shift: CycloNum

    def __post_init__(self):
        object.__setattr__(self, "linear", _as_cyclo(self.linear))
        object.__setattr__(self, "shift", _as_cyclo(self.shift))
        if not self.linear.is_root_of_unity():
            raise ValueError("linear part must be a root of unity")

    @staticmethod
    def identity() -> "AffineGerm":
        return AffineGerm(CycloNum.one(), CycloNum.zero())

    def compose(self, other: "AffineGerm") -> "AffineGerm":
        return AffineGerm(
            self.linear * other.linear, self.linear * other.shift + self.shift
        )

    def invert(self) -> "AffineGerm":
        inv = self.linear.inverse()
        return AffineGerm(inv, -(inv * self.shift))

    def power(self, e: int) -> "AffineGerm":
        if e < 0:
            return self.invert().power(-e)
        out = AffineGerm.identity()
        base = self
        while e:
            if e & 1:
                out = out.compose(base)
            base = base.compose(base)
            e >>= 1
        return out

    def is_identity(self) -> bool:
        return self.linear.is_one() and self.shift.is_zero()

    def __str__(self):
        return f"z -> ({self.linear})*z + ({self.shift})"


def affine_compose(a: AffineGerm, b: AffineGerm) -> AffineGerm:
    return a.compose(b)


def affine_invert(a: AffineGerm) -> AffineGerm:
    return a.invert()


def affine_word(gens: Sequence[AffineGerm], word: Iterable[int]) -> AffineGerm:
    """Product of generators by signed 1-based indices: 2 means gens[1],
    -2 its inverse; evaluated left to right as composition."""
    out = AffineGerm.identity()
    for idx in word:
        if idx == 0:
            raise ValueError("word indices are signed and 1-based; 0 is invalid")
        g = gens[abs(idx) - 1]
        out = out.compose(g if idx > 0 else g.invert())
    return out


# -- integer lattices in a cyclotomic field -----------------------------------


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _hnf_insert(basis: list[list[int]], pivots: list[int], vec: list[int]):
    """Insert vec into an integer row-echelon basis (Hermite style)."""
    v = list(vec)
    n = len(v)
    j = 0
    while True:
        while j < n and v[j] == 0:
            j += 1
        if j == n:
            return
        if j in pivots:
            r = pivots.index(j)
            row = basis[r]
            a, b = row[j], v[j]
            if b % a == 0:
                q = b // a
                for c in range(j, n):
                    v[c] -= q * row[c]
            else:
                g, x, y = _xgcd(a, b)
                new_row = [x * row[c] + y * v[c] for c in range(n)]
                v = [(-b // g) * row[c] + (a // g) * v[c] for c in range(n)]
                basis[r] = new_row
        else:
            pos = 0
            while pos < len(pivots) and pivots[pos] < j:
                pos += 1
            basis.insert(pos, v)
            pivots.insert(pos, j)
            return


def _hnf_normalize(basis: list[list[int]], pivots: list[int]):
    n = len(basis[0]) if basis else 0
    for r in range(len(basis)):
        if basis[r][pivots[r]] < 0:
            basis[r] = [-x for x in basis[r]]
    for r in range(len(basis) - 1, -1, -1):
        p = pivots[r]
        a = basis[r][p]
        for above in range(r):
            q = basis[above][p] // a
            if q:
                basis[above] = [x - q * y for x, y in zip(basis[above], basis[r])]


class ZModule:
    """Finitely generated additive subgroup of Q(zeta_ambient).

    Stored as den^{-1} * (integer HNF basis rows) over the power-basis
    coordinates; membership, rank, and sublattice indices are exact.
    """

    __slots__ = ("ambient", "den", "rows", "pivots")

    def __init__(self, ambient: int, generators: Iterable[CycloNum]):
        self.ambient = ambient
        phi = euler_phi(ambient)
        gens = [g.lifted_coeffs(ambient) for g in generators]
        den = 1
        for coeffs in gens:
            for q in coeffs:
                den = den * q.denominator // math.gcd(den, q.denominator)
        basis: list[list[int]] = []
        pivots: list[int] = []
        for coeffs in gens:
            vec = [int(q * den) for q in coeffs]
            if any(vec):
                _hnf_insert(basis, pivots, vec)
        if basis:
            _hnf_normalize(basis, pivots)
        # reduce den by common content
        g = den
        for row in basis:
            for x in row:
                if x:
                    g = math.gcd(g, x)
        if g > 1:
            den //= g
            basis = [[x // g for x in row] for row in basis]
        self.den = den
        self.rows = [tuple(r) for r in basis]
        self.pivots = list(pivots)

    # -- structure ---------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis_elements(self) -> list[CycloNum]:
        return [
            CycloNum(self.ambient, tuple(Fraction(x, self.den) for x in row))
            for row in self.rows
        ]

    def contains(self, x: CycloNum) -> bool:
        if self.ambient % x.order != 0:
            m = math.lcm(self.ambient, x.order)
            return ZModule(m, self.basis_elements()).contains(x.lift(m))
        coeffs = x.lifted_coeffs(self.ambient)
        scaled = [q * self.den for q in coeffs]
        if any(q.denominator != 1 for q in scaled):
            return False
        v = [int(q) for q in scaled]
        for r, p in zip(self.rows, self.pivots):
            if v[p]:
                if v[p] % r[p] != 0:
                    return False
                q = v[p] // r[p]
                v = [a - q * b for a, b in zip(v, r)]
        return not any(v)

    def with_extra(self, gens: Iterable[CycloNum]) -> "ZModule":
        return ZModule(self.ambient, self.basis_elements() + list(gens))

    def scaled(self, c: CycloNum) -> "ZModule":
        return ZModule(self.ambient, [b * c for b in self.basis_elements()])

    def key(self):
        return (self.ambient, self.den, tuple(self.rows))

    def __eq__(self, other):
        if not isinstance(other, ZModule):
            return NotImplemented
        if self.ambient != other.ambient:
            a = ZModule(math.lcm(self.ambient, other.ambient), self.basis_elements())
            b = ZModule(math.lcm(self.ambient, other.ambient), other.basis_elements())
            return a == b
        return self.den == other.den and self.rows == other.rows

    def __hash__(self):
        return hash(self.key())

    def index_of_sublattice(self, sub: "ZModule") -> int:
        """[self : sub] for a finite-index sublattice; raises if not one."""
        if sub.rank != self.rank:
            raise ValueError("sublattice has smaller rank; index is infinite")
        mat = []
        for b in sub.basis_elements():
            coords = self._coordinates(b)
            if coords is None:
                raise ValueError("not a sublattice")
            mat.append(coords)
        det = _int_det(mat)
        if det == 0:
            raise ValueError("degenerate sublattice basis")
        return abs(det)

    def _coordinates(self, x: CycloNum):
        """Integer coordinates of x in the basis, or None."""
        coeffs = x.lifted_coeffs(self.ambient)
        v = [q * self.den for q in coeffs]
        out = []
        for r, p in zip(self.rows, self.pivots):
            q = v[p] / r[p]
            if q.denominator != 1:
                return None
            q = int(q)
            out.append(q)
            v = [a - q * b for a, b in zip(v, r)]
        if any(v):
            return None
        return out


def _int_det(mat: list[list[int]]) -> int:
    n = len(mat)
    m = [ [Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    assert det.denominator == 1
    return int(det)


@dataclass(frozen=True)
class DiscretenessVerdict:
    discrete: bool
    rank: int


def zmodule_discreteness(mod: ZModule) -> DiscretenessVerdict:
    """A finitely generated subgroup of (C, +) is discrete iff its rank is at
    most 2 and, at rank 2, the basis elements are R-linearly independent.
    The independence test is exact: the ratio of the basis elements is a
    cyclotomic number, and it is real iff fixed by conjugation."""
    r = mod.rank
    if r <= 1:
        return DiscretenessVerdict(True, r)
    if r > 2:
        return DiscretenessVerdict(False, r)
    b1, b2 = mod.basis_elements()
    ratio = b2 / b1
    real = ratio.conjugate() == ratio
    return DiscretenessVerdict(not real, 2)


# -- the translation lattice of a pure-power pair ------------------------------


def standard_generators(n: int, m: int) -> tuple[AffineGerm, AffineGerm, int]:
    """Deck generators for (z^n, (z+1)^m): z -> eps*z and z -> delta*z + (delta-1),
    with eps, delta the canonical primitive roots inside Q(zeta_lcm)."""
    d = math.lcm(n, m)
    eps = CycloNum.zeta_power(d, d // n)
    delta = CycloNum.zeta_power(d, d // m)
    hp = AffineGerm(eps, CycloNum.zero())
    hq = AffineGerm(delta, delta - 1)
    return hp, hq, d


def _int_mul_by_power(vec, k: int, rows, d: int):
    phi = len(vec)
    out = [0] * phi
    for i, x in enumerate(vec):
        if x:
            row = rows[(i + k) % d]
            for j in range(phi):
                if row[j]:
                    out[j] += x * row[j]
    return tuple(out)


def translation_lattice(n: int, m: int, word_bound: int = 8) -> ZModule:
    """The additive group generated by the shifts of all words of length at
    most word_bound in the standard generators that have trivial linear part,
    closed under multiplication by eps and delta until stable."""
    if n < 2 or m < 2:
        raise ValueError("translation_lattice needs n, m >= 2")
    d = math.lcm(n, m)
    phi = euler_phi(d)
    rows = zeta_power_table(d)
    zero = (0,) * phi
    e0 = tuple(rows[0])

    def mk(linexp: int, shiftvec):
        return (linexp % d, tuple(shiftvec))

    # generators as (linear exponent mod d, integer shift vector)
    kp, kq = d // n, d // m
    delta_vec = tuple(rows[kq])
    hq_shift = tuple(a - b for a, b in zip(delta_vec, e0))
    gens = []
    for le, sv in ((kp, zero), (kq, hq_shift)):
        gens.append(mk(le, sv))
        # inverse: (zeta^-e, -zeta^-e t)
        inv_shift = _int_mul_by_power([-x for x in sv], (d - le) % d, rows, d)
        gens.append(mk(-le, inv_shift))

    seen = {mk(0, zero)}
    frontier = [mk(0, zero)]
    shifts = []
    for _ in range(word_bound):
        nxt = []
        for le, sv in frontier:
            for ge, gv in gens:
                # (zeta^le, sv) o (zeta^ge, gv) = (zeta^(le+ge), zeta^le*gv + sv)
                nv = _int_mul_by_power(gv, le, rows, d)
                nv = tuple(a + b for a, b in zip(nv, sv))
                el = mk(le + ge, nv)
                if el not in seen:
                    seen.add(el)
                    nxt.append(el)
                    if el[0] == 0 and any(el[1]):
                        shifts.append(el[1])
        frontier = nxt
    cyclos = [
        CycloNum(d, tuple(Fraction(x) for x in sv)) for sv in shifts
    ]
    mod = ZModule(d, cyclos)
    eps = CycloNum.zeta_power(d, kp)
    delta = CycloNum.zeta_power(d, kq)
    while True:
        bigger = mod.with_extra(
            [b * eps for b in mod.basis_elements()]
            + [b * delta for b in mod.basis_elements()]
        )
        if bigger == mod:
            return mod
        mod = bigger


def is_formally_discrete_standard(n: int, m: int, word_bound: int = 8) -> bool:
    """Decide formal discreteness for the pair (z^n, (z+1)^m) by the exact
    lattice computation, cross-checked against the closed-form criterion
    lcm(n, m) in {2, 3, 4, 6}; disagreement raises InvariantViolation."""
    mod = translation_lattice(n, m, word_bound)
    verdict = zmodule_discreteness(mod)
    predicted = math.lcm(n, m) in {2, 3, 4, 6}
    if verdict.discrete != predicted:
        raise InvariantViolation(
            f"lattice verdict {verdict} disagrees with the lcm criterion for ({n},{m})"
        )
    return verdict.discrete


# -- scaled flow germs ---------------------------------------------------------


@dataclass(frozen=True)
class FlowGerm:
    """lambda * (time-t flow of z^{k+1} d/dz), an element of the level-k
    scaled-flow group with product (a,t)(b,s) = (ab, t*b^k + s)."""

    k: int
    scale: CycloNum
    time: CycloNum

    def __post_init__(self):
        object.__setattr__(self, "scale", _as_cyclo(self.scale))
        object.__setattr__(self, "time", _as_cyclo(self.time))
        if self.k < 1:
            raise ValueError("level k must be >= 1")
        if self.scale.is_zero():
            raise ValueError("scale must be nonzero")

    @staticmethod
    def identity(k: int) -> "FlowGerm":
        return FlowGerm(k, CycloNum.one(), CycloNum.zero())

    def is_identity(self) -> bool:
        return self.scale.is_one() and self.time.is_zero()

    def is_central(self) -> bool:
        return (self.scale ** self.k).is_one() and self.time.is_zero()


def flow_compose(a: FlowGerm, b: FlowGerm) -> FlowGerm:
    if a.k != b.k:
        raise ValueError("flow germs live at different levels")
    return FlowGerm(a.k, a.scale * b.scale, a.time * (b.scale ** a.k) + b.time)


def flow_invert(a: FlowGerm) -> FlowGerm:
    inv = a.scale.inverse()
    return FlowGerm(a.k, inv, -(a.time * (inv ** a.k)))


def flow_flatten(a: FlowGerm, d: int) -> FlowGerm:
    """The bijective homomorphism (lambda, t) at level k -> (lambda^k, t) at
    level 1, defined on scales with lambda^d = 1 and requiring gcd(d, k) = 1."""
    if math.gcd(d, a.k) != 1:
        raise ValueError("flattening needs gcd(d, k) = 1")
    if not (a.scale ** d).is_one():
        raise ValueError("scale is not a d-th root of unity")
    return FlowGerm(1, a.scale ** a.k, a.time)
