"""Short Weierstrass curves y^2 = x^3 + a x + b and their group law.

The coefficient field is generic: plain Fractions give a curve over Q,
``RatFunc`` values give a curve over Q(t). All arithmetic is exact, so a
point either satisfies its curve equation identically or it does not.

A ``Family`` bundles a curve over Q(t) with a marked section; it is the
object the specialization and scan modules consume. Families load from
JSON objects ``{"label": ..., "a": ..., "b": ..., "Px": ..., "Py": ...}``
using the serialization from ``exactarith``, and the loader rejects any
section that is not exactly on the curve.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import (
    FamilyFileError,
    InputError,
    IsotrivialFamilyError,
    PointNotOnCurveError,
    SingularCurveError,
)
from .exactarith import RatFunc

MAZUR_ORDER_BOUND = 12  # torsion orders over Q lie in {1..10, 12}


@dataclass(frozen=True)
class Point:
    """Affine point (x, y) or the point at infinity (x = y = None)."""

    x: object = None
    y: object = None

    @classmethod
    def infinity(cls) -> "Point":
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:
        if self.is_infinity:
            return "Point(infinity)"
        return f"Point({self.x}, {self.y})"


@dataclass(frozen=True)
class Curve:
    """Nonsingular curve y^2 = x^3 + a x + b over Q or Q(t)."""

    a: object
    b: object

    def __post_init__(self):
        if isinstance(self.a, int):
            object.__setattr__(self, "a", Fraction(self.a))
        if isinstance(self.b, int):
            object.__setattr__(self, "b", Fraction(self.b))
        if not self.discriminant:
            raise SingularCurveError(
                f"singular curve: discriminant vanishes for a={self.a}, b={self.b}"
            )

    @property
    def discriminant(self):
        a, b = self.a, self.b
        return -16 * (4 * a * a * a + 27 * b * b)

    @property
    def is_function_field(self) -> bool:
        return isinstance(self.a, RatFunc)

    def contains(self, pt: Point) -> bool:
        if pt.is_infinity:
            return True
        x, y = pt.x, pt.y
        return y * y == x * x * x + self.a * x + self.b

    def require_on_curve(self, pt: Point) -> None:
        if not self.contains(pt):
            raise PointNotOnCurveError(f"{pt} is not on y^2 = x^3 + ({self.a})x + ({self.b})")

    def negate(self, pt: Point) -> Point:
        if pt.is_infinity:
            return pt
        return Point(pt.x, -pt.y)

    def add(self, p: Point, q: Point) -> Point:
        """Chord-tangent sum; handles every case including p = -q."""
        if p.is_infinity:
            return q
        if q.is_infinity:
            return p
        if p.x == q.x:
            if p.y == -q.y:
                return Point.infinity()
            lam = (3 * p.x * p.x + self.a) / (2 * p.y)
        else:
            lam = (q.y - p.y) / (q.x - p.x)
        x3 = lam * lam - p.x - q.x
        return Point(x3, lam * (p.x - x3) - p.y)

    def double(self, p: Point) -> Point:
        return self.add(p, p)

    def multiply(self, n: int, p: Point) -> Point:
        """[n]p by double-and-add; negative n negates first."""
        if n < 0:
            n, p = -n, self.negate(p)
        acc, base = Point.infinity(), p
        while n:
            if n & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            n >>= 1
        return acc

    def j_invariant(self):
        a, b = self.a, self.b
        num = 1728 * 4 * a * a * a
        return num / (4 * a * a * a + 27 * b * b)


def is_isotrivial(curve: Curve) -> bool:
    """True when the j-invariant is constant (all fibers isomorphic)."""
    if not curve.is_function_field:
        return True
    return curve.j_invariant().is_constant


def torsion_order(curve: Curve, pt: Point):
    """Exact torsion order of pt, or None when pt is non-torsion.

    Over Q the order of a torsion point is at most 12 (and never 11), so
    the scan up to 12 is a proof either way. Over Q(t) the same bound is
    used for non-isotrivial families, where the fibral specializations
    bound the torsion; isotrivial families are refused.
    """
    curve.require_on_curve(pt)
    if curve.is_function_field and is_isotrivial(curve):
        raise IsotrivialFamilyError(
            "torsion detection over Q(t) needs a nonconstant j-invariant"
        )
    acc = pt
    for n in range(1, MAZUR_ORDER_BOUND + 1):
        if acc.is_infinity:
            return n
        acc = curve.add(acc, pt)
    return None


@dataclass(frozen=True)
class Family:
    """A curve over Q(t) with a marked section and a display label."""

    curve: Curve
    section: Point
    label: str = ""

    def __post_init__(self):
        if not self.curve.is_function_field:
            raise InputError("a family needs coefficients in Q(t)")
        self.curve.require_on_curve(self.section)

    @property
    def is_isotrivial(self) -> bool:
        return is_isotrivial(self.curve)

    def to_json(self) -> dict:
        sec = self.section
        return {
            "label": self.label,
            "a": self.curve.a.to_json(),
            "b": self.curve.b.to_json(),
            "Px": sec.x.to_json() if not sec.is_infinity else None,
            "Py": sec.y.to_json() if not sec.is_infinity else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Family":
        if not isinstance(obj, dict):
            raise FamilyFileError("family file must hold a JSON object")
        missing = {"a", "b", "Px", "Py"} - set(obj)
        if missing:
            raise FamilyFileError(f"family object is missing {sorted(missing)}")
        try:
            a = RatFunc.from_json(obj["a"])
            b = RatFunc.from_json(obj["b"])
            px = RatFunc.from_json(obj["Px"])
            py = RatFunc.from_json(obj["Py"])
        except InputError as exc:
            raise FamilyFileError(f"bad family coefficients: {exc}") from exc
        try:
            curve = Curve(a, b)
        except SingularCurveError as exc:
            raise FamilyFileError(str(exc)) from exc
        section = Point(px, py)
        if not curve.contains(section):
            raise FamilyFileError(
                "section is not on the curve: "
                f"({px}, {py}) fails y^2 = x^3 + ({a})x + ({b})"
            )
        return cls(curve, section, str(obj.get("label", "")))


def load_family(path) -> Family:
    """Read and validate a family JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FamilyFileError(f"cannot read family file {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyFileError(f"family file {path} is not valid JSON: {exc}") from exc
    return Family.from_json(obj)
