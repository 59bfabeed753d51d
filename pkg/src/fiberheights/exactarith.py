"""Exact arithmetic over Q and Q(t).

Rationals are plain ``fractions.Fraction`` values, re-exported as
``Rational``: always reduced, denominator positive, so equality is a data
comparison.

Polynomials in t over Q are immutable coefficient tuples, constant term
first, with no trailing zero; the empty tuple is the zero polynomial.  The
degree of the zero polynomial is ``None`` rather than an integer sentinel,
so it can never silently flow into a degree or height formula.

Rational functions are reduced fractions num/den of polynomials whose
denominator is monic; the scalar freedom sits entirely in the numerator.
Normalization happens on construction, so here too equality is a data
comparison and normalization is idempotent by construction.

Serialization: a rational is the string "p/q" ("p" when q = 1); a
polynomial is a JSON array of such strings, constant term first; a rational
function is either a bare polynomial array or ``{"num": [...], "den":
[...]}``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import (
    FactorizationLimitError,
    InputError,
    PoleError,
    ZeroDenominatorError,
)

Rational = Fraction

_TRIAL_DIVISION_LIMIT = 1 << 22


def parse_rational(s: str) -> Fraction:
    """Parse "p/q" or "p" into a reduced Fraction."""
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {s!r}") from exc


def format_rational(x: Fraction) -> str:
    """Render a Fraction as "p/q", omitting the denominator when it is 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise InputError(f"not a rational coefficient: {c!r}")


class Poly:
    """Univariate polynomial over Q, coefficient tuple, constant term first.

    Invariant: the last stored coefficient is nonzero; the zero polynomial
    stores the empty tuple and has degree ``None``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.coeffs,))

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def t(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((_as_fraction(c),))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """Degree as an int, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "Poly":
        """Scale so the leading coefficient is 1; monic(0) = 0."""
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        lead = self.coeffs[-1]
        return Poly(c / lead for c in self.coeffs)

    def evaluate(self, x0) -> Fraction:
        x0 = _as_fraction(x0)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x0 + c
        return acc

    def order_at(self, x0) -> int:
        """Multiplicity of x0 as a root (0 when p(x0) != 0)."""
        if self.is_zero:
            raise InputError("every point is a root of the zero polynomial")
        p, k = self, 0
        while p.evaluate(x0) == 0:
            p, _ = divmod(p, Poly((-_as_fraction(x0), 1)))
            k += 1
        return k

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise InputError("negative polynomial power")
        out, base = Poly.one(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db, lead = len(other.coeffs) - 1, other.coeffs[-1]
        if len(rem) <= db:
            return Poly.zero(), self
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] / lead
            if c:
                quot[k - db] = c
                for i, cb in enumerate(other.coeffs):
                    rem[i + k - db] -= c * cb
        return Poly(quot), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other)
        return NotImplemented

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, obj) -> "Poly":
        if not isinstance(obj, list):
            raise InputError(f"polynomial must be a JSON array, got {obj!r}")
        return cls(parse_rational(str(c)) for c in obj)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            mag = abs(c)
            if i == 0:
                body = format_rational(mag)
            else:
                var = "t" if i == 1 else f"t^{i}"
                body = var if mag == 1 else f"{format_rational(mag)}*{var}"
            parts.append(f"{sign} {body}" if parts else f"{sign}{body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor; poly_gcd(a, 0) = monic(a)."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def _divisors(n: int, budget: int = _TRIAL_DIVISION_LIMIT) -> list[int]:
    # plain trial division; desk-scale constants only
    n = abs(n)
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        if d > budget:
            raise FactorizationLimitError(
                f"coefficient {n} too large for the rational-root scan"
            )
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    divs = [1]
    for p, e in factors.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(set(divs))


def rational_roots(p: Poly) -> dict[Fraction, int]:
    """All rational roots of p with multiplicities; p must be nonzero."""
    if p.is_zero:
        raise InputError("the zero polynomial has every rational as a root")
    roots: dict[Fraction, int] = {}
    k = 0
    while p.coeffs[0] == 0:
        p = Poly(p.coeffs[1:])
        k += 1
    if k:
        roots[Fraction(0)] = k
    if p.degree == 0:
        return roots
    den = math.lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    for u, v in itertools.product(_divisors(ints[0]), _divisors(ints[-1])):
        for cand in (Fraction(u, v), Fraction(-u, v)):
            if cand in roots:
                continue
            if p.evaluate(cand) == 0:
                mult = p.order_at(cand)
                roots[cand] = mult
    return roots


class RatFunc:
    """Rational function over Q: reduced fraction num/den, den monic.

    Invariant: gcd(num, den) = 1, den monic and nonzero; zero is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=Poly.zero(), den=Poly.one()):
        num = self._poly_of(num)
        den = self._poly_of(den)
        if den.is_zero:
            raise ZeroDenominatorError("rational function with zero denominator")
        if num.is_zero:
            num, den = Poly.zero(), Poly.one()
        else:
            g = poly_gcd(num, den)
            if g.degree:
                num, den = num // g, den // g
            lead = den.leading
            if lead != 1:
                num = Poly(c / lead for c in num.coeffs)
                den = Poly(c / lead for c in den.coeffs)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    def __reduce__(self):
        return (RatFunc, (self.num, self.den))

    @classmethod
    def _trusted(cls, num: Poly, den: Poly) -> "RatFunc":
        # caller guarantees gcd(num, den) = 1; only monic rescaling is done
        self = object.__new__(cls)
        if num.is_zero:
            num, den = Poly.zero(), Poly.one()
        else:
            lead = den.leading
            if lead != 1:
                num = Poly(c / lead for c in num.coeffs)
                den = Poly(c / lead for c in den.coeffs)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        return self

    @classmethod
    def constant(cls, c) -> "RatFunc":
        return cls(Poly.constant(c))

    @classmethod
    def t(cls) -> "RatFunc":
        return cls(Poly.t())

    @staticmethod
    def _poly_of(v) -> Poly:
        if isinstance(v, Poly):
            return v
        if isinstance(v, (int, Fraction)):
            return Poly.constant(v)
        raise InputError(f"not a polynomial: {v!r}")

    @property
    def is_constant(self) -> bool:
        return self.den == Poly.one() and (self.num.degree in (None, 0))

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise InputError(f"{self} is not constant")
        return self.num.coeffs[0] if self.num.coeffs else Fraction(0)

    def evaluate(self, t0) -> Fraction:
        """Exact value at t0; raises PoleError with the pole multiplicity."""
        dv = self.den.evaluate(t0)
        if dv == 0:
            mult = self.den.order_at(t0)
            raise PoleError(f"pole of order {mult} at t = {t0}", mult)
        return self.num.evaluate(t0) / dv

    def __bool__(self) -> bool:
        return not self.num.is_zero

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RatFunc", self.num.coeffs, self.den.coeffs))

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return cls(cls._poly_of(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._trusted(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc.constant(1) / self ** (-n)
        out, base = RatFunc.constant(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def to_json(self):
        if self.den == Poly.one():
            return self.num.to_json()
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj) -> "RatFunc":
        if isinstance(obj, dict):
            extra = set(obj) - {"num", "den"}
            if extra or "num" not in obj or "den" not in obj:
                raise InputError(f"rational function object needs num/den: {obj!r}")
            return cls(Poly.from_json(obj["num"]), Poly.from_json(obj["den"]))
        if isinstance(obj, list):
            return cls(Poly.from_json(obj))
        if isinstance(obj, (str, int)):
            return cls.constant(parse_rational(str(obj)))
        raise InputError(f"not a polynomial or rational function: {obj!r}")

    def __str__(self) -> str:
        if self.den == Poly.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"
