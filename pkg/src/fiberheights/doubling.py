"""x-coordinate duplication chains for the limit heights.

The x-coordinate of [2]P depends only on x(P):

    x([2]P) = (x^4 - 2a x^2 - 8b x + a^2) / (4(x^3 + a x + b))

Over Q the chain keeps x([2^m]P) as a reduced pair of big integers; over
Q(t) as a reduced pair of primitive integer polynomials together with the
integer denominators of the curve coefficients.

Reduction over Q(t) does not need a full-size polynomial gcd: a common
factor of the two duplication forms evaluated at coprime (p, q) can only
vanish where the specialized forms fail to be coprime, i.e. over roots of
the discriminant numerator or of the coefficient denominators. Common
factors are therefore extracted against that fixed polynomial.
"""

from __future__ import annotations

import math
from fractions import Fraction

try:
    from gmpy2 import mpz
    from gmpy2 import gcd as _zgcd
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    mpz = int
    _zgcd = math.gcd

from . import intpoly
from .exactarith import Poly, RatFunc, poly_gcd
from .weierstrass import Curve, Point


class XChainQ:
    """x([2^m]P) on a curve over Q, as reduced big-integer pairs.

    A level of None means [2^m]P is the point at infinity (and stays so).
    """

    def __init__(self, curve: Curve, start: Point):
        a, b = curve.a, curve.b
        self._A = mpz(a.numerator)
        self._da = mpz(a.denominator)
        self._B = mpz(b.numerator)
        self._db = mpz(b.denominator)
        if start.is_infinity:
            self.levels = [None]
        else:
            x = start.x
            self.levels = [(mpz(x.numerator), mpz(x.denominator))]

    def _extend(self) -> None:
        top = self.levels[-1]
        if top is None:
            self.levels.append(None)
            return
        p, q = top
        A, da, B, db = self._A, self._da, self._B, self._db
        S = da * da * db
        p2 = p * p
        q2 = q * q
        p3 = p2 * p
        q3 = q2 * q
        p4 = p2 * p2
        q4 = q2 * q2
        num = S * p4 - 2 * A * da * db * p2 * q2 - 8 * B * da * da * p * q3 \
            + A * A * db * q4
        den = 4 * (S * p3 * q + A * da * db * p * q3 + B * da * da * q4)
        if den == 0:
            self.levels.append(None)
            return
        g = _zgcd(num, den)
        num //= g
        den //= g
        if den < 0:
            num, den = -num, -den
        self.levels.append((num, den))

    def level(self, m: int):
        while len(self.levels) <= m:
            self._extend()
        return self.levels[m]

    def x_fraction(self, m: int):
        """x([2^m]P) as a Fraction, or None at infinity."""
        lv = self.level(m)
        if lv is None:
            return None
        return Fraction(int(lv[0]), int(lv[1]))

    def naive_height(self, m: int) -> float:
        lv = self.level(m)
        if lv is None:
            return 0.0
        return log_of_int(max(abs(lv[0]), lv[1]))


class XChainFF:
    """x([2^m]P) on a curve over Q(t), as reduced primitive pairs in Z[t]."""

    def __init__(self, curve: Curve, start: Point):
        self._A, self._Da = self._as_int_pair(curve.a)
        self._B, self._Db = self._as_int_pair(curve.b)
        self._bad, _ = intpoly.from_poly(_bad_locus_poly(curve))
        if start.is_infinity:
            self.levels = [None]
        else:
            p, q = self._as_int_pair(start.x)
            self.levels = [self._normalize_pair(p, q)]

    @staticmethod
    def _as_int_pair(f: RatFunc) -> tuple[list[int], list[int]]:
        # f = num/den with rational coefficients -> coprime pair in Z[t]
        pn, pd = intpoly.from_poly(f.num)
        qn, qd = intpoly.from_poly(f.den)
        p = intpoly.zscale(pn, qd)
        q = intpoly.zscale(qn, pd)
        c = math.gcd(intpoly.zcontent(p), intpoly.zcontent(q))
        if c > 1:
            p = [x // c for x in p]
            q = [x // c for x in q]
        return p, q

    @staticmethod
    def _normalize_pair(p: list[int], q: list[int]):
        if not q:
            return None
        c = math.gcd(intpoly.zcontent(p), intpoly.zcontent(q))
        if c > 1:
            p = [x // c for x in p]
            q = [x // c for x in q]
        if q[-1] < 0:
            p, q = intpoly.zneg(p), intpoly.zneg(q)
        return (p, q)

    def _shared_bad_factor(self, h: list[int]) -> list[int]:
        """The factor of h supported on the bad locus, as a primitive int poly."""
        acc = [1]
        g = poly_gcd(intpoly.to_poly(h), intpoly.to_poly(self._bad))
        while g.degree:
            gi, _ = intpoly.from_poly(g)
            c = intpoly.zcontent(gi)
            gi = [x // c for x in gi]
            acc = intpoly.zmul(acc, gi)
            h = intpoly.zdivexact(h, gi)
            g = poly_gcd(intpoly.to_poly(h), g)
        return acc

    def _extend(self) -> None:
        top = self.levels[-1]
        if top is None:
            self.levels.append(None)
            return
        p, q = top
        A, Da, B, Db = self._A, self._Da, self._B, self._Db
        zm = intpoly.zmul
        S = zm(zm(Da, Da), Db)
        p2 = zm(p, p)
        q2 = zm(q, q)
        p3 = zm(p2, p)
        q3 = zm(q2, q)
        p4 = zm(p2, p2)
        q4 = zm(q2, q2)
        ADaDb = zm(A, zm(Da, Db))
        BDa2 = zm(B, zm(Da, Da))
        num = intpoly.zadd(
            intpoly.zadd(zm(S, p4), intpoly.zscale(zm(ADaDb, zm(p2, q2)), -2)),
            intpoly.zadd(intpoly.zscale(zm(BDa2, zm(p, q3)), -8),
                         zm(zm(A, A), zm(Db, q4))),
        )
        den = intpoly.zscale(
            intpoly.zadd(zm(S, zm(p3, q)),
                         intpoly.zadd(zm(ADaDb, zm(p, q3)), zm(BDa2, q4))),
            4,
        )
        if not den:
            self.levels.append(None)
            return
        gn = self._shared_bad_factor(num) if num else [1]
        gd = self._shared_bad_factor(den)
        g = poly_gcd(intpoly.to_poly(gn), intpoly.to_poly(gd))
        if g.degree:
            gi, _ = intpoly.from_poly(g)
            gi = [x // intpoly.zcontent(gi) for x in gi]
            num = intpoly.zdivexact(num, gi) if num else []
            den = intpoly.zdivexact(den, gi)
        self.levels.append(self._normalize_pair(num, den))

    def level(self, m: int):
        while len(self.levels) <= m:
            self._extend()
        return self.levels[m]

    def is_infinity_level(self, m: int) -> bool:
        return self.level(m) is None

    def height_degree(self, m: int) -> int:
        """max(deg num, deg den) of the reduced x([2^m]P); 0 at infinity."""
        lv = self.level(m)
        if lv is None:
            return 0
        p, q = lv
        return max(len(p) - 1 if p else 0, len(q) - 1)

    def x_ratfunc(self, m: int):
        """x([2^m]P) as a RatFunc, or None at infinity."""
        lv = self.level(m)
        if lv is None:
            return None
        p, q = lv
        return RatFunc._trusted(intpoly.to_poly(p), intpoly.to_poly(q))

    def evaluate_x(self, m: int, t0: Fraction):
        """x([2^m]P)(t0) as a Fraction; None when t0 is a pole of the level.

        At an infinity level the specialized multiple is the point at
        infinity for every parameter; the caller decides how to treat it.
        """
        lv = self.level(m)
        if lv is None:
            return None
        p, q = lv
        pn, qn = intpoly.zeval_pair(p, q, t0.numerator, t0.denominator)
        if qn == 0:
            return None
        return Fraction(pn, qn)


def _bad_locus_poly(curve: Curve) -> Poly:
    """Fixed polynomial whose roots contain every possible cancellation.

    Common factors of one duplication step can only sit over parameters
    where the specialized duplication forms share a root: roots of the
    discriminant numerator or poles of the coefficients.
    """
    disc = curve.discriminant
    out = disc.num * curve.a.den * curve.b.den
    return out


def log_of_int(n) -> float:
    """Natural log of a positive integer, safe for huge values."""
    n = int(n)
    if n <= 0:
        raise ValueError("log of a nonpositive integer")
    if n.bit_length() <= 900:
        return math.log(n)
    k = n.bit_length() - 64
    return math.log(n >> k) + k * math.log(2)
